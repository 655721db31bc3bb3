import logging
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Optional, Sequence, Tuple

from numpy.polynomial import Polynomial

from enrichfem.core.exceptions import InputError, ProblemDefinitionError
from enrichfem.services.analysis import ExactSolution
from enrichfem.services.problem import (
    BoundaryCondition,
    CoefficientLike,
    InterfaceKind,
    InterfaceSpec,
    ProblemSpec,
    as_coefficient,
)

logger = logging.getLogger("repo.benchmarks")

# Exponent parameter of the layered wall model.
WALL_EXPONENT = 4

INJECTION_INTERFACE = 1 / 9
WALL_INTERFACES = (1 / 3, 2 / 3)


@dataclass(frozen=True)
class ReferenceRow:
    h: Fraction
    l2: float
    h1_broken: float
    nodal: Optional[float]
    cond: float


@dataclass(frozen=True)
class BenchmarkProblem:
    id: int
    problem: ProblemSpec
    exact: Optional[ExactSolution]
    degree: int
    reference: Tuple[ReferenceRow, ...]

    def reference_row(self, h: float) -> Optional[ReferenceRow]:
        for row in self.reference:
            if float(row.h) == h:
                return row
        return None


def _rows(values: Sequence[Tuple]) -> Tuple[ReferenceRow, ...]:
    return tuple(
        ReferenceRow(Fraction(1, 8 * 2**level), *row) for level, row in enumerate(values)
    )


# Reference results per benchmark id: (L2, broken H1, nodal, condition number) for h = 1/8 ... 1/512.
_REFERENCE: Dict[int, Tuple[ReferenceRow, ...]] = {
    1: _rows([
        (1.43943e-03, 6.59920e-02, 4.85121e-03, 0.137850e+06),
        (3.40683e-04, 3.24574e-02, 1.01654e-03, 0.143171e+06),
        (8.39493e-05, 1.61603e-02, 2.46808e-04, 0.271847e+06),
        (2.09052e-05, 8.07152e-03, 6.12768e-04, 0.346975e+06),
        (5.22499e-06, 4.03471e-03, 1.53121e-04, 0.125160e+07),
        (1.30868e-06, 2.01723e-03, 3.82653e-06, 0.839319e+07),
        (3.26874e-07, 1.00859e-03, 9.56539e-07, 0.835384e+08),
    ]),
    2: _rows([
        (8.58406e-03, 2.91716e-01, 2.07071e-02, 0.127626e+05),
        (2.11391e-03, 1.46341e-01, 4.56597e-03, 0.109720e+06),
        (5.30238e-04, 7.35572e-02, 1.11087e-03, 0.304583e+06),
        (1.32359e-04, 3.67855e-02, 2.76462e-04, 0.175135e+07),
        (3.31638e-05, 1.84188e-02, 6.91011e-05, 0.511390e+07),
        (8.29035e-06, 9.21011e-03, 1.72680e-05, 0.277080e+08),
        (2.07405e-06, 4.60678e-03, 4.31719e-06, 0.825348e+08),
    ]),
    3: _rows([
        (8.58383e-03, 2.91715e-01, 2.07048e-02, 0.516955e+06),
        (2.11387e-03, 1.46341e-01, 4.56552e-03, 0.207890e+06),
        (5.30234e-04, 7.35577e-02, 1.11075e-03, 0.422880e+06),
        (1.32358e-04, 3.67868e-02, 2.76434e-04, 0.175140e+07),
        (3.31640e-05, 1.84202e-02, 6.90932e-05, 0.511405e+07),
        (8.29083e-06, 9.21222e-03, 1.72659e-05, 0.277086e+08),
        (2.07413e-06, 4.61030e-03, 5.16955e-06, 0.129948e+09),
    ]),
    4: _rows([
        (5.26785e-05, 2.78963e-03, None, 0.173135e+07),
        (6.50740e-06, 6.78494e-04, None, 0.137419e+07),
        (8.10800e-07, 1.68376e-04, None, 0.435007e+07),
        (1.01260e-07, 4.20145e-05, None, 0.632200e+07),
        (1.26572e-08, 1.05011e-05, None, 0.126631e+08),
        (1.58255e-09, 2.62599e-06, None, 0.690704e+08),
        (1.97777e-10, 6.56287e-07, None, 0.803646e+09),
    ]),
    5: _rows([
        (6.27646e-04, 3.33102e-02, None, 0.103879e+07),
        (8.13417e-05, 8.48195e-03, None, 0.628185e+07),
        (1.02475e-05, 2.12831e-03, None, 0.168823e+08),
        (1.28511e-06, 5.33221e-04, None, 0.100139e+09),
        (1.60820e-07, 1.33419e-04, None, 0.270291e+09),
        (2.01127e-08, 3.33693e-05, None, 0.159784e+10),
        (2.51467e-09, 8.34410e-06, None, 0.432363e+10),
    ]),
    6: _rows([
        (6.27649e-04, 3.33100e-02, None, 0.252824e+07),
        (8.13414e-05, 8.48190e-03, None, 0.628277e+07),
        (1.02475e-05, 2.12830e-03, None, 0.168830e+08),
        (1.28510e-06, 5.33218e-04, None, 0.100141e+09),
        (1.60819e-07, 1.33418e-04, None, 0.270294e+09),
        (2.01127e-08, 3.33692e-05, None, 0.159785e+10),
        (2.51466e-09, 8.34407e-06, None, 0.125011e+11),
    ]),
}


def wall_coefficients(n: int = WALL_EXPONENT) -> Dict[str, float]:
    """Diffusivities D_i and convection parameters delta_i of the layered wall, in evaluation order."""
    D0, delta0 = 1.0, 0.0
    D1 = 18 * (n - 1) / (10 * n)
    delta1 = 0.5 * (9 * n * D1 - 8.1 * (n - 1))
    D2 = (6 * n * D1 - 2 * delta1) / (3 * (n + 1))
    delta2 = 0.5 * (3 * (n + 1) * D2 - 3 * n * D1 + 2 * delta1)
    D3 = (8 * delta2 - 3 * (n + 1) * D2) / (3 * (n + 5))
    delta3 = 0.25 * (3 * (n - 1) * D3 - 3 * (n + 1) * D2 + 4 * delta2)
    # lambda = 1 / (81 (n - 1) D_0)
    lam = 1.0 / (81 * (n - 1) * D0)
    return {
        "D0": D0, "delta0": delta0, "D1": D1, "delta1": delta1,
        "D2": D2, "delta2": delta2, "D3": D3, "delta3": delta3, "lambda": lam,
    }


def manufactured_rhs(
    exact: ExactSolution,
    diffusivity: Sequence[CoefficientLike],
    convection: Sequence[CoefficientLike],
    reaction: Sequence[CoefficientLike],
) -> Tuple[Polynomial, ...]:
    """Per-layer f = (-D u' + 2 delta u)' + w u by polynomial arithmetic."""
    polynomials = exact.polynomials
    if polynomials is None:
        raise ProblemDefinitionError("A manufactured source needs polynomial exact branches")

    sources = []
    for layer, u in enumerate(polynomials):
        coefficients = [as_coefficient(c[layer]) for c in (diffusivity, convection, reaction)]
        if not all(isinstance(c, Polynomial) for c in coefficients):
            raise ProblemDefinitionError(f"Layer {layer}: manufactured sources need polynomial coefficients")
        D, delta, w = coefficients
        flux = -D * u.deriv() + 2.0 * delta * u
        sources.append(flux.deriv() + w * u)
    return tuple(sources)


def _wall_problem(
    name: str,
    interfaces: Sequence[InterfaceSpec],
    diffusivity: Sequence[float],
    convection: Sequence[float],
    reaction: Sequence[float],
    branches: Sequence[Polynomial],
    right_value: float,
) -> Tuple[ProblemSpec, ExactSolution]:
    breakpoints = [0.0] + [i.alpha for i in interfaces] + [1.0]
    exact = ExactSolution.from_polynomials(branches, breakpoints)
    source = manufactured_rhs(exact, diffusivity, convection, reaction)
    problem = ProblemSpec(
        domain=(0.0, 1.0),
        interfaces=tuple(interfaces),
        diffusivity=tuple(diffusivity),
        convection=tuple(convection),
        reaction=tuple(reaction),
        source=source,
        bc_left=BoundaryCondition.neumann(0.0),
        bc_right=BoundaryCondition.dirichlet(right_value),
        exact=exact,
        name=name,
    )
    return problem, exact


def _injection_layer(n: int) -> Polynomial:
    return Polynomial.basis(n - 1) / 30.0


def _build(geometry: int, n: int = WALL_EXPONENT) -> Tuple[ProblemSpec, ExactSolution]:
    c = wall_coefficients(n)
    injection = InterfaceSpec(INJECTION_INTERFACE, InterfaceKind.IMPLICIT, lam=c["lambda"])
    walls = [InterfaceSpec(alpha, InterfaceKind.CONTINUOUS) for alpha in WALL_INTERFACES]
    u1 = Polynomial.basis(n) / 3.0
    u2 = Polynomial.basis(n + 1)
    u3 = 3.0 * Polynomial([1.0, -1.0]) * Polynomial.basis(n + 1)

    if geometry == 1:
        return _wall_problem(
            "discontinuous", [injection],
            diffusivity=[c["D0"], c["D1"]],
            convection=[c["delta0"], c["delta1"]],
            reaction=[0.0, 0.0],
            branches=[_injection_layer(n), u1],
            right_value=float(u1(1.0)),
        )
    if geometry == 2:
        return _wall_problem(
            "continuous", walls,
            diffusivity=[c["D1"], c["D2"], c["D3"]],
            convection=[c["delta1"], c["delta2"], c["delta3"]],
            reaction=[10.0, 1.0, 0.1],
            branches=[u1, u2, u3],
            right_value=float(u3(1.0)),
        )
    return _wall_problem(
        "implicit-and-explicit", [injection] + walls,
        diffusivity=[c["D0"], c["D1"], c["D2"], c["D3"]],
        convection=[c["delta0"], c["delta1"], c["delta2"], c["delta3"]],
        reaction=[0.0, 10.0, 1.0, 0.1],
        branches=[_injection_layer(n), u1, u2, u3],
        right_value=float(u3(1.0)),
    )


def catalog_problem(problem_id: int) -> BenchmarkProblem:
    if problem_id not in _REFERENCE:
        raise InputError(f"Unknown benchmark problem {problem_id}; valid ids are 1..6")

    geometry = (problem_id - 1) % 3 + 1
    degree = 1 if problem_id <= 3 else 2
    problem, exact = _build(geometry)
    logger.debug(f"Loaded benchmark {problem_id} ({problem.name}, P{degree})")
    return BenchmarkProblem(
        id=problem_id, problem=problem, exact=exact, degree=degree, reference=_REFERENCE[problem_id]
    )
