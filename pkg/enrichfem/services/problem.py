from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple, Union

import numpy as np
from numpy.polynomial import Polynomial

from enrichfem.core.exceptions import ProblemDefinitionError
from enrichfem.services.enrichment import Side, gamma_from_lambda

if TYPE_CHECKING:
    from enrichfem.services.analysis import ExactSolution

logger = logging.getLogger("service.problem")

Coefficient = Callable[[np.ndarray], np.ndarray]
CoefficientLike = Union[Coefficient, float, Sequence[float]]

_SAMPLES_PER_LAYER = 17


def as_coefficient(value: CoefficientLike) -> Coefficient:
    """Constants and ascending coefficient lists become numpy Polynomials; callables pass through."""
    if isinstance(value, Polynomial) or callable(value):
        return value
    if np.isscalar(value):
        return Polynomial([float(value)])
    return Polynomial(np.asarray(value, dtype=float))


def is_zero(coefficient: Coefficient) -> bool:
    return isinstance(coefficient, Polynomial) and not np.any(coefficient.coef)


class InterfaceKind(str, Enum):
    CONTINUOUS = "continuous"
    IMPLICIT = "implicit"


@dataclass(frozen=True)
class InterfaceSpec:
    alpha: float
    kind: InterfaceKind = InterfaceKind.CONTINUOUS
    lam: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", InterfaceKind(self.kind))
        if self.kind == InterfaceKind.IMPLICIT:
            if self.lam is None or not self.lam > 0 or not np.isfinite(self.lam):
                raise ProblemDefinitionError(
                    f"Implicit interface at {self.alpha!r} needs a finite jump coefficient lambda > 0, got {self.lam!r}"
                )

    @property
    def has_jump_term(self) -> bool:
        return self.kind == InterfaceKind.IMPLICIT


class BoundaryKind(str, Enum):
    DIRICHLET = "dirichlet"
    NEUMANN = "neumann"


@dataclass(frozen=True)
class BoundaryCondition:
    kind: BoundaryKind
    value: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "kind", BoundaryKind(self.kind))

    @classmethod
    def dirichlet(cls, value: float) -> "BoundaryCondition":
        return cls(BoundaryKind.DIRICHLET, float(value))

    @classmethod
    def neumann(cls, flux: float = 0.0) -> "BoundaryCondition":
        return cls(BoundaryKind.NEUMANN, float(flux))

    @property
    def is_dirichlet(self) -> bool:
        return self.kind == BoundaryKind.DIRICHLET


@dataclass(frozen=True)
class ProblemSpec:
    """Layered two-point problem (-D u' + 2 delta u)' + w u = f with interface jump conditions.

    Every coefficient tuple holds one entry per layer, layers being separated by the
    interface coordinates in increasing order.
    """

    domain: Tuple[float, float]
    interfaces: Tuple[InterfaceSpec, ...]
    diffusivity: Tuple[Coefficient, ...]
    convection: Tuple[Coefficient, ...]
    reaction: Tuple[Coefficient, ...]
    source: Tuple[Coefficient, ...]
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    exact: Optional["ExactSolution"] = None
    name: str = "custom"
    breakpoints: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        a, b = (float(v) for v in self.domain)
        interfaces = tuple(self.interfaces)
        breakpoints = np.array([a] + [i.alpha for i in interfaces] + [b], dtype=float)
        if not np.all(np.diff(breakpoints) > 0):
            raise ProblemDefinitionError(
                f"Layer breakpoints must be strictly increasing, got {breakpoints.tolist()}"
            )
        breakpoints.setflags(write=False)

        object.__setattr__(self, "domain", (a, b))
        object.__setattr__(self, "interfaces", interfaces)
        object.__setattr__(self, "breakpoints", breakpoints)

        for name in ("diffusivity", "convection", "reaction", "source"):
            layers = tuple(as_coefficient(c) for c in getattr(self, name))
            if len(layers) != self.n_layers:
                raise ProblemDefinitionError(
                    f"'{name}' has {len(layers)} layers, expected {self.n_layers}"
                )
            object.__setattr__(self, name, layers)

        for layer in range(self.n_layers):
            samples = self.layer_samples(layer)
            if np.min(self.diffusivity[layer](samples)) <= 0:
                raise ProblemDefinitionError(f"Diffusivity must be positive on layer {layer}")
            if np.min(self.reaction[layer](samples)) < 0:
                raise ProblemDefinitionError(f"Reaction coefficient must be non-negative on layer {layer}")

        if self.exact is not None:
            self.exact.validate_against(self)

    @property
    def n_layers(self) -> int:
        return len(self.interfaces) + 1

    @property
    def has_convection(self) -> bool:
        return not all(is_zero(c) for c in self.convection)

    def layer_bounds(self, layer: int) -> Tuple[float, float]:
        return float(self.breakpoints[layer]), float(self.breakpoints[layer + 1])

    def layer_samples(self, layer: int) -> np.ndarray:
        lo, hi = self.layer_bounds(layer)
        return np.linspace(lo, hi, _SAMPLES_PER_LAYER)

    def layer_of(self, x: float, side: Side = Side.RIGHT) -> int:
        """Layer owning x; at an interface the side decides, at b the last layer."""
        where = "left" if Side(side) == Side.LEFT else "right"
        layer = int(np.searchsorted(self.breakpoints, x, side=where)) - 1
        return min(max(layer, 0), self.n_layers - 1)

    def interface_gamma(self, index: int) -> float:
        interface = self.interfaces[index]
        if interface.kind == InterfaceKind.CONTINUOUS:
            return 0.0
        alpha = np.array([interface.alpha])
        beta_minus = float(self.diffusivity[index](alpha)[0])
        beta_plus = float(self.diffusivity[index + 1](alpha)[0])
        return gamma_from_lambda(interface.lam, beta_minus, beta_plus)

    def with_convection(self, convection: Sequence[CoefficientLike]) -> "ProblemSpec":
        return replace(self, convection=tuple(convection))
