from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import TYPE_CHECKING, Callable, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import Polynomial

from enrichfem.core.config import settings
from enrichfem.core.exceptions import OrderError, ProblemDefinitionError, SpaceError
from enrichfem.schemas.models import ErrorReport
from enrichfem.services.assembly import integration_cells, map_rule, quadrature_rule
from enrichfem.services.enrichment import Side
from enrichfem.services.femspace import EnrichedSpace

if TYPE_CHECKING:
    from enrichfem.services.problem import ProblemSpec

logger = logging.getLogger("service.analysis")

CONTINUITY_TOLERANCE = 1e-12
_CONTRAST_QUAD_POINTS = 8

Evaluable = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class Branch:
    value: Evaluable
    derivative: Evaluable
    polynomial: Optional[Polynomial] = None


@dataclass(frozen=True)
class ExactSolution:
    """Per-layer branches, each evaluable on the whole domain so it doubles as its own extension."""

    branches: Tuple[Branch, ...]
    breakpoints: np.ndarray

    def __post_init__(self):
        breakpoints = np.array(self.breakpoints, dtype=float)
        breakpoints.setflags(write=False)
        object.__setattr__(self, "breakpoints", breakpoints)
        object.__setattr__(self, "branches", tuple(self.branches))
        if len(self.branches) != len(breakpoints) - 1:
            raise ProblemDefinitionError(
                f"{len(self.branches)} branches for {len(breakpoints) - 1} layers"
            )

    @classmethod
    def from_polynomials(cls, polynomials: Sequence, breakpoints: Sequence[float]) -> "ExactSolution":
        branches = []
        for p in polynomials:
            p = p if isinstance(p, Polynomial) else Polynomial(np.asarray(p, dtype=float))
            branches.append(Branch(value=p, derivative=p.deriv(), polynomial=p))
        return cls(branches=tuple(branches), breakpoints=breakpoints)

    @property
    def n_layers(self) -> int:
        return len(self.branches)

    @property
    def polynomials(self) -> Optional[Tuple[Polynomial, ...]]:
        if any(branch.polynomial is None for branch in self.branches):
            return None
        return tuple(branch.polynomial for branch in self.branches)

    def branch_index(self, x: float, side: Side = Side.RIGHT) -> int:
        where = "left" if Side(side) == Side.LEFT else "right"
        index = int(np.searchsorted(self.breakpoints, x, side=where)) - 1
        return min(max(index, 0), self.n_layers - 1)

    def value(self, branch: int, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.branches[branch].value(np.asarray(x, dtype=float)), dtype=float)

    def derivative(self, branch: int, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.branches[branch].derivative(np.asarray(x, dtype=float)), dtype=float)

    def __call__(self, x: float, side: Side = Side.RIGHT) -> float:
        branch = self.branch_index(x, side)
        return float(self.value(branch, np.array([x]))[0])

    def jump(self, interface: int) -> float:
        alpha = np.array([self.breakpoints[interface + 1]])
        return float(self.value(interface + 1, alpha)[0] - self.value(interface, alpha)[0])

    def validate_against(self, problem: "ProblemSpec") -> None:
        from enrichfem.services.problem import InterfaceKind

        if self.n_layers != problem.n_layers or not np.array_equal(self.breakpoints, problem.breakpoints):
            raise ProblemDefinitionError("Exact solution layers do not match the problem's interfaces")
        for index, interface in enumerate(problem.interfaces):
            if interface.kind != InterfaceKind.CONTINUOUS:
                continue
            alpha = np.array([interface.alpha])
            left = float(self.value(index, alpha)[0])
            right = float(self.value(index + 1, alpha)[0])
            if abs(right - left) > CONTINUITY_TOLERANCE * max(1.0, abs(left), abs(right)):
                raise ProblemDefinitionError(
                    f"Exact solution jumps by {right - left:.3e} at continuous interface {interface.alpha!r}"
                )


def interpolate_enriched(exact: ExactSolution, space: EnrichedSpace, correct_jump: bool = True) -> np.ndarray:
    """Free coefficients of I_h p = pi_h p + pi_h(p2' - p1') psi + delta psi.

    ``correct_jump=False`` omits the delta psi term, which is only exact for
    continuous solutions.
    """
    if space.degree != 1:
        raise SpaceError("The enriched interpolation operator is defined for degree 1 spaces only")

    full = np.zeros(space.n_total)
    nodes = space.mesh.nodes
    for node, x in enumerate(nodes):
        full[node] = exact.value(exact.branch_index(x), np.array([x]))[0]

    for index, psi in enumerate(space.enrichments):
        left = exact.branch_index(psi.alpha, Side.LEFT)
        right = exact.branch_index(psi.alpha, Side.RIGHT)
        ends = np.array([psi.x_k, psi.x_k1])
        slope_gap = exact.derivative(right, ends) - exact.derivative(left, ends)

        delta = 0.0
        if correct_jump:
            at_alpha = np.array([psi.alpha])
            jump = float(exact.value(right, at_alpha)[0] - exact.value(left, at_alpha)[0])
            delta = -jump / (psi.alpha - psi.x_k1)

        first, second = space.enrichment_dofs(index)
        full[first] = slope_gap[0] + delta
        full[second] = slope_gap[1] + delta

    return full[space.free_dofs]


def compute_errors(
    exact: ExactSolution,
    space: EnrichedSpace,
    coeffs: Sequence[float],
    quad_npts: Optional[int] = None,
) -> ErrorReport:
    full = space.full_vector(coeffs)
    points, weights = quadrature_rule(settings.DEFAULT_QUAD_POINTS if quad_npts is None else quad_npts)
    l2, h1 = 0.0, 0.0

    for element in range(space.mesh.n_elements):
        for lo, hi in integration_cells(space, element):
            x, w = map_rule(points, weights, lo, hi)
            branch = exact.branch_index(0.5 * (lo + hi))
            dofs, N, dN = space.element_basis(element, x)
            error = exact.value(branch, x) - full[dofs] @ N
            slope_error = exact.derivative(branch, x) - full[dofs] @ dN
            l2 += float(w @ error**2)
            h1 += float(w @ slope_error**2)

    nodal = 0.0
    for i in range(1, space.mesh.n_elements):
        x = float(space.mesh.nodes[i])
        dofs, N, _ = space.element_basis(i, np.array([x]))
        error = exact.value(exact.branch_index(x), np.array([x]))[0] - full[dofs] @ N[:, 0]
        nodal = max(nodal, abs(float(error)))

    return ErrorReport(l2=math.sqrt(l2), h1_broken=math.sqrt(h1), nodal_max=nodal)


def interpolation_errors(exact: ExactSolution, space: EnrichedSpace, quad_npts: Optional[int] = None) -> ErrorReport:
    return compute_errors(exact, space, interpolate_enriched(exact, space), quad_npts)


def observed_orders(h_list: Sequence[float], e_list: Sequence[float]) -> list[float]:
    if len(h_list) != len(e_list):
        raise OrderError(f"{len(h_list)} mesh sizes but {len(e_list)} errors")
    if len(h_list) < 2:
        raise OrderError("At least two refinement levels are needed for an order")
    if any(e <= 0 for e in e_list):
        raise OrderError(f"Orders are undefined for non-positive errors: {list(e_list)}")

    return [
        math.log(e_list[i] / e_list[i + 1]) / math.log(h_list[i] / h_list[i + 1])
        for i in range(len(h_list) - 1)
    ]


def mean_final_orders(orders: Sequence[Optional[float]], count: int = 3) -> float:
    """Mean of the last ``count`` defined orders."""
    tail = [order for order in orders if order is not None][-count:]
    if not tail:
        raise OrderError("No orders to average")
    return sum(tail) / len(tail)


def coefficient_contrast(problem: "ProblemSpec") -> float:
    """sup D / inf D over Gauss points of every layer."""
    points, weights = quadrature_rule(_CONTRAST_QUAD_POINTS)
    samples = []
    for layer in range(problem.n_layers):
        x, _ = map_rule(points, weights, *problem.layer_bounds(layer))
        samples.append(np.broadcast_to(problem.diffusivity[layer](x), x.shape))
    values = np.concatenate(samples)
    low, high = float(np.min(values)), float(np.max(values))
    if low <= 0:
        raise ProblemDefinitionError(f"Diffusivity must be positive, found {low}")
    return high / low
