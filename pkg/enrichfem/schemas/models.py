from typing import List, Literal, Optional, Union
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

ReportFormat = Literal["csv", "md", "json"]
PolynomialCoefficients = List[float]


class ErrorReport(BaseModel):
    l2: float = Field(ge=0.0)
    h1_broken: float = Field(ge=0.0)
    nodal_max: float = Field(ge=0.0)
    cond: Optional[float] = Field(default=None, ge=0.0)

    model_config = ConfigDict(frozen=True)


class ConvergenceRow(BaseModel):
    h: float = Field(gt=0.0)
    n_elements: int = Field(ge=1)
    n_dofs: int = Field(ge=1)
    l2: float = Field(ge=0.0)
    h1_broken: float = Field(ge=0.0)
    nodal: float = Field(ge=0.0)
    cond: Optional[float] = Field(default=None, ge=0.0)


class TableMetadata(BaseModel):
    problem: str
    degree: int
    quad_points: int
    refinement_factor: int = 2
    h0: str
    levels: int
    timestamp: Optional[str] = None
    version: str


class ConvergenceTable(BaseModel):
    metadata: TableMetadata
    rows: List[ConvergenceRow]
    order_l2: List[Optional[float]] = Field(default_factory=list)
    order_h1: List[Optional[float]] = Field(default_factory=list)
    order_nodal: List[Optional[float]] = Field(default_factory=list)

    @model_validator(mode="after")
    def check_shape(self):
        if not self.rows:
            raise ValueError("A convergence table needs at least one row")
        factor = self.metadata.refinement_factor
        for coarse, fine in zip(self.rows, self.rows[1:]):
            if not fine.h < coarse.h or abs(coarse.h / fine.h - factor) > 1e-9 * factor:
                raise ValueError(f"Mesh sizes must shrink by the factor {factor}: {coarse.h} -> {fine.h}")
        for name in ("order_l2", "order_h1", "order_nodal"):
            if len(getattr(self, name)) != len(self.rows) - 1:
                raise ValueError(f"'{name}' must have one entry fewer than the rows")
        return self


# Problem files

class InterfaceModel(BaseModel):
    alpha: float
    kind: Literal["continuous", "implicit"] = "continuous"
    lam: Optional[float] = Field(default=None, alias="lambda")

    model_config = ConfigDict(populate_by_name=True, extra="forbid")

    @model_validator(mode="after")
    def check_lambda(self):
        if self.kind == "implicit" and (self.lam is None or self.lam <= 0):
            raise ValueError("an implicit interface needs lambda > 0")
        return self


class LayerModel(BaseModel):
    D: PolynomialCoefficients
    delta_conv: PolynomialCoefficients = Field(default_factory=lambda: [0.0])
    w: PolynomialCoefficients = Field(default_factory=lambda: [0.0])
    f: Union[PolynomialCoefficients, Literal["manufactured"]]

    model_config = ConfigDict(extra="forbid")

    @field_validator("D", "delta_conv", "w")
    @classmethod
    def non_empty(cls, value: List[float]) -> List[float]:
        if not value:
            raise ValueError("coefficient list must not be empty")
        return value


class BoundaryModel(BaseModel):
    dirichlet: Optional[float] = None
    neumann: Optional[float] = None

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def exactly_one(self):
        if (self.dirichlet is None) == (self.neumann is None):
            raise ValueError("give exactly one of 'dirichlet' or 'neumann'")
        if self.neumann is not None and self.neumann != 0.0:
            raise ValueError("only zero Neumann data is supported")
        return self


class BoundaryConditionsModel(BaseModel):
    left: BoundaryModel
    right: BoundaryModel

    model_config = ConfigDict(extra="forbid")


class ProblemFile(BaseModel):
    name: str = "custom"
    domain: List[float] = Field(min_length=2, max_length=2)
    interfaces: List[InterfaceModel] = Field(default_factory=list)
    layers: List[LayerModel] = Field(min_length=1)
    bc: BoundaryConditionsModel
    exact: Optional[List[PolynomialCoefficients]] = None
    degree: Optional[int] = Field(default=None, ge=1, le=2)

    model_config = ConfigDict(extra="forbid")

    @model_validator(mode="after")
    def check_layers(self):
        a, b = self.domain
        if not a < b:
            raise ValueError(f"domain must satisfy a < b, got {self.domain}")
        alphas = [i.alpha for i in self.interfaces]
        if alphas != sorted(alphas) or len(set(alphas)) != len(alphas):
            raise ValueError("interfaces must be listed in strictly increasing order")
        if len(self.layers) != len(self.interfaces) + 1:
            raise ValueError(f"expected {len(self.interfaces) + 1} layers for {len(self.interfaces)} interfaces")
        if self.exact is not None and len(self.exact) != len(self.layers):
            raise ValueError("'exact' needs one coefficient list per layer")
        if any(layer.f == "manufactured" for layer in self.layers) and self.exact is None:
            raise ValueError("a 'manufactured' source requires 'exact'")
        return self

