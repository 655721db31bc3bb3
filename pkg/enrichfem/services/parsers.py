import json
import logging
from fractions import Fraction
from pathlib import Path
from typing import Union

from numpy.polynomial import Polynomial
from pydantic import ValidationError

from enrichfem.core.exceptions import InputError, ProblemFileError
from enrichfem.repositories.benchmarks import BenchmarkProblem, catalog_problem, manufactured_rhs
from enrichfem.schemas.models import BoundaryModel, ProblemFile
from enrichfem.services.analysis import ExactSolution
from enrichfem.services.problem import BoundaryCondition, InterfaceKind, InterfaceSpec, ProblemSpec

logger = logging.getLogger("service.parsers")


def _boundary(model: BoundaryModel) -> BoundaryCondition:
    if model.dirichlet is not None:
        return BoundaryCondition.dirichlet(model.dirichlet)
    return BoundaryCondition.neumann(model.neumann)


def parse_problem_payload(text: str) -> ProblemFile:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ProblemFileError(f"Invalid JSON: {e.msg}", line=e.lineno) from e

    try:
        return ProblemFile.model_validate(data)
    except ValidationError as e:
        first = e.errors()[0]
        field = ".".join(str(part) for part in first["loc"]) or None
        raise ProblemFileError(f"Invalid problem file: {first['msg']}", field=field) from e


def problem_from_file_model(model: ProblemFile) -> BenchmarkProblem:
    """Turn a validated problem file into the same shape the catalog returns (id 0, no reference rows)."""
    breakpoints = [model.domain[0]] + [i.alpha for i in model.interfaces] + [model.domain[1]]
    exact = ExactSolution.from_polynomials(model.exact, breakpoints) if model.exact is not None else None

    diffusivity = [Polynomial(layer.D) for layer in model.layers]
    convection = [Polynomial(layer.delta_conv) for layer in model.layers]
    reaction = [Polynomial(layer.w) for layer in model.layers]
    manufactured = manufactured_rhs(exact, diffusivity, convection, reaction) if exact is not None else None
    source = [
        manufactured[i] if layer.f == "manufactured" else Polynomial(layer.f)
        for i, layer in enumerate(model.layers)
    ]

    problem = ProblemSpec(
        domain=(model.domain[0], model.domain[1]),
        interfaces=tuple(
            InterfaceSpec(i.alpha, InterfaceKind(i.kind), lam=i.lam) for i in model.interfaces
        ),
        diffusivity=tuple(diffusivity),
        convection=tuple(convection),
        reaction=tuple(reaction),
        source=tuple(source),
        bc_left=_boundary(model.bc.left),
        bc_right=_boundary(model.bc.right),
        exact=exact,
        name=model.name,
    )
    return BenchmarkProblem(id=0, problem=problem, exact=exact, degree=model.degree or 1, reference=())


def load_problem_file(path: Union[str, Path]) -> BenchmarkProblem:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except OSError as e:
        raise ProblemFileError(f"Cannot read problem file {path}: {e.strerror}") from e

    model = parse_problem_payload(text)
    try:
        problem = problem_from_file_model(model)
    except InputError as e:
        raise ProblemFileError(f"Invalid problem in {path}: {e}") from e
    logger.info(f"Loaded problem '{problem.problem.name}' from {path}")
    return problem


def resolve_problem(source: str) -> BenchmarkProblem:
    """Catalog id ("1".."6") or path to a JSON problem file."""
    if source.strip().isdigit():
        return catalog_problem(int(source))
    return load_problem_file(source)


def parse_mesh_size(text: str) -> Fraction:
    try:
        h = Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as e:
        raise InputError(f"Invalid mesh size {text!r}; use a rational like 1/8") from e
    if h <= 0:
        raise InputError(f"Mesh size must be positive, got {text!r}")
    return h
