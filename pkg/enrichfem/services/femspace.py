import logging
from dataclasses import dataclass
from typing import List, Optional, Sequence, Tuple, Union

import numpy as np

from enrichfem.core.exceptions import SpaceError
from enrichfem.services.enrichment import EnrichmentFunction, Side
from enrichfem.services.mesh import Mesh1D, locate_element
from enrichfem.services.problem import BoundaryCondition

logger = logging.getLogger("service.femspace")


@dataclass(frozen=True)
class StandardDof:
    node: int
    x: float
    constrained: bool


@dataclass(frozen=True)
class EnrichedDof:
    interface: int
    element: int
    # 0: phi_k * psi, 1: phi_{k+1} * psi
    attachment: int
    node: int


Dof = Union[StandardDof, EnrichedDof]


def _lagrange_shapes(degree: int, t: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Lagrange shape functions on [0, 1] and their t-derivatives, shape (degree+1, len(t))."""
    if degree == 1:
        values = np.array([1.0 - t, t])
        derivs = np.array([-np.ones_like(t), np.ones_like(t)])
    else:
        values = np.array([
            2.0 * (t - 0.5) * (t - 1.0),
            4.0 * t * (1.0 - t),
            2.0 * t * (t - 0.5),
        ])
        derivs = np.array([4.0 * t - 3.0, 4.0 - 8.0 * t, 4.0 * t - 1.0])
    return values, derivs


@dataclass(frozen=True)
class EnrichedSpace:
    """Lagrange P1/P2 space plus the two products phi_k psi, phi_{k+1} psi per interface.

    The DOF table lists every standard node (constrained or free) followed by the
    enrichment pairs; ``free_dofs`` maps free unknown i to its table position.
    """

    mesh: Mesh1D
    degree: int
    enrichments: Tuple[EnrichmentFunction, ...]
    bc_left: BoundaryCondition
    bc_right: BoundaryCondition
    dof_table: Tuple[Dof, ...]
    free_dofs: np.ndarray
    constrained_dofs: np.ndarray
    lift: np.ndarray

    @property
    def n_free(self) -> int:
        return len(self.free_dofs)

    @property
    def n_standard(self) -> int:
        return self.degree * self.mesh.n_elements + 1

    @property
    def n_total(self) -> int:
        return len(self.dof_table)

    def element_dofs(self, element: int) -> np.ndarray:
        start = self.degree * element
        standard = np.arange(start, start + self.degree + 1)
        for j, psi in enumerate(self.enrichments):
            if psi.element == element:
                first = self.n_standard + 2 * j
                return np.concatenate([standard, [first, first + 1]])
        return standard

    def enrichment_dofs(self, interface: int) -> Tuple[int, int]:
        first = self.n_standard + 2 * interface
        return first, first + 1

    def enrichment_on(self, element: int) -> Optional[EnrichmentFunction]:
        for psi in self.enrichments:
            if psi.element == element:
                return psi
        return None

    def element_basis(self, element: int, x: np.ndarray, side: Side = Side.RIGHT) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Table indices, values and x-derivatives of every DOF supported on ``element``.

        Values and derivatives have shape (n_local, len(x)); ``side`` only matters
        for the enrichment at its interface point.
        """
        x = np.atleast_1d(np.asarray(x, dtype=float))
        x_k, x_k1 = self.mesh.element_bounds(element)
        h = x_k1 - x_k
        t = (x - x_k) / h
        values, derivs = _lagrange_shapes(self.degree, t)
        derivs = derivs / h

        psi = self.enrichment_on(element)
        if psi is not None:
            psi_value, psi_slope = psi.values(x, side)
            hats = np.array([(x_k1 - x) / h, (x - x_k) / h])
            hat_slopes = np.array([-1.0 / h, 1.0 / h])
            enriched_values = hats * psi_value
            enriched_derivs = hat_slopes[:, None] * psi_value + hats * psi_slope
            values = np.vstack([values, enriched_values])
            derivs = np.vstack([derivs, enriched_derivs])

        return self.element_dofs(element), values, derivs

    def element_at(self, x: float, side: Side) -> int:
        element = locate_element(self.mesh, x)
        if Side(side) == Side.LEFT and element > 0 and x == self.mesh.nodes[element]:
            return element - 1
        return element

    def full_vector(self, coeffs: Sequence[float], lift: Optional[np.ndarray] = None) -> np.ndarray:
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.shape != (self.n_free,):
            raise SpaceError(f"Expected {self.n_free} free coefficients, got {coeffs.shape}")
        full = np.array(self.lift if lift is None else lift, dtype=float)
        if full.shape != (self.n_total,):
            raise SpaceError(f"Expected a lift of length {self.n_total}, got {full.shape}")
        full[self.free_dofs] = coeffs
        return full


def build_space(
    mesh: Mesh1D,
    degree: int,
    enrichments: Sequence[EnrichmentFunction],
    bc_left: BoundaryCondition,
    bc_right: BoundaryCondition,
) -> EnrichedSpace:
    if degree not in (1, 2):
        raise SpaceError(f"Only degree 1 and 2 elements are supported, got {degree}")

    enrichments = tuple(enrichments)
    flagged = mesh.interface_elements
    for psi in enrichments:
        if psi.element not in flagged:
            raise SpaceError(f"Enrichment references element {psi.element}, which holds no interface")
    if tuple(psi.element for psi in enrichments) != flagged:
        raise SpaceError(
            f"Enrichments must follow the mesh interfaces in order: expected elements {flagged}, "
            f"got {tuple(psi.element for psi in enrichments)}"
        )

    n_standard = degree * mesh.n_elements + 1
    local_points = np.linspace(0.0, 1.0, degree + 1)
    table: List[Dof] = []
    lift = np.zeros(n_standard + 2 * len(enrichments))
    for node in range(n_standard):
        element, local = divmod(node, degree)
        if element == mesh.n_elements:
            element, local = element - 1, degree
        x_k, x_k1 = mesh.element_bounds(element)
        x = x_k + local_points[local] * (x_k1 - x_k)
        constrained = (node == 0 and bc_left.is_dirichlet) or (node == n_standard - 1 and bc_right.is_dirichlet)
        table.append(StandardDof(node=node, x=float(x), constrained=constrained))
        if constrained:
            lift[node] = bc_left.value if node == 0 else bc_right.value

    for j, psi in enumerate(enrichments):
        table.append(EnrichedDof(interface=j, element=psi.element, attachment=0, node=psi.element))
        table.append(EnrichedDof(interface=j, element=psi.element, attachment=1, node=psi.element + 1))

    constrained = np.array(
        [i for i, dof in enumerate(table) if isinstance(dof, StandardDof) and dof.constrained], dtype=int
    )
    free = np.array(
        [i for i, dof in enumerate(table) if not (isinstance(dof, StandardDof) and dof.constrained)], dtype=int
    )
    for array in (constrained, free, lift):
        array.setflags(write=False)

    space = EnrichedSpace(
        mesh=mesh,
        degree=degree,
        enrichments=enrichments,
        bc_left=bc_left,
        bc_right=bc_right,
        dof_table=tuple(table),
        free_dofs=free,
        constrained_dofs=constrained,
        lift=lift,
    )
    logger.debug(f"Enriched P{degree} space: {space.n_free} free DOFs, {len(enrichments)} interfaces")
    return space


def eval_basis(space: EnrichedSpace, x: float, side: Side) -> List[Tuple[int, float, float]]:
    element = space.element_at(x, side)
    dofs, values, derivs = space.element_basis(element, np.array([x]), side)
    return [(int(d), float(v), float(dv)) for d, v, dv in zip(dofs, values[:, 0], derivs[:, 0])]


def eval_function(
    space: EnrichedSpace,
    coeffs: Sequence[float],
    x: float,
    side: Side,
    lift: Optional[np.ndarray] = None,
) -> Tuple[float, float]:
    full = space.full_vector(coeffs, lift)
    value, slope = 0.0, 0.0
    for dof, phi, dphi in eval_basis(space, x, side):
        value += full[dof] * phi
        slope += full[dof] * dphi
    return value, slope
