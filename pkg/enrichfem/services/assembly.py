import logging
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import List, Optional, Tuple

import numpy as np
import scipy.linalg as la
from scipy import special

from enrichfem.core.config import settings
from enrichfem.core.exceptions import ProblemDefinitionError, QuadratureError, SingularSystemError
from enrichfem.services.enrichment import Side
from enrichfem.services.femspace import EnrichedSpace
from enrichfem.services.problem import ProblemSpec

logger = logging.getLogger("service.assembly")

MAX_QUAD_POINTS = 16
PIVOT_TOLERANCE = 1e-14
RESIDUAL_TOLERANCE = 1e-10


@dataclass(frozen=True)
class AssembledSystem:
    matrix: np.ndarray
    rhs: np.ndarray
    space: EnrichedSpace
    # Couplings of the whole DOF table, before the Dirichlet lift is eliminated.
    full_matrix: np.ndarray

    @property
    def size(self) -> int:
        return self.matrix.shape[0]


@lru_cache(maxsize=None)
def _gauss_legendre(npts: int) -> Tuple[np.ndarray, np.ndarray]:
    points, weights = special.roots_legendre(npts)
    points.setflags(write=False)
    weights.setflags(write=False)
    return points, weights


def quadrature_rule(npts: int) -> Tuple[np.ndarray, np.ndarray]:
    """Gauss-Legendre points and weights on [-1, 1], exact up to degree 2*npts - 1."""
    if int(npts) != npts or not 1 <= npts <= MAX_QUAD_POINTS:
        raise QuadratureError(f"Quadrature points must be an integer in 1..{MAX_QUAD_POINTS}, got {npts}")
    return _gauss_legendre(int(npts))


def map_rule(points: np.ndarray, weights: np.ndarray, lo: float, hi: float) -> Tuple[np.ndarray, np.ndarray]:
    half = 0.5 * (hi - lo)
    return lo + half * (points + 1.0), half * weights


def integration_cells(space: EnrichedSpace, element: int) -> List[Tuple[float, float]]:
    """The element itself, or its two halves split at the interface point."""
    x_k, x_k1 = space.mesh.element_bounds(element)
    psi = space.enrichment_on(element)
    if psi is None:
        return [(x_k, x_k1)]
    return [(x_k, psi.alpha), (psi.alpha, x_k1)]


def _jump_vector(space: EnrichedSpace, interface: int) -> Tuple[np.ndarray, np.ndarray]:
    psi = space.enrichments[interface]
    dofs, left, _ = space.element_basis(psi.element, np.array([psi.alpha]), Side.LEFT)
    _, right, _ = space.element_basis(psi.element, np.array([psi.alpha]), Side.RIGHT)
    enriched = np.isin(dofs, space.enrichment_dofs(interface))
    return dofs[enriched], (right[:, 0] - left[:, 0])[enriched]


def assemble_system(
    problem: ProblemSpec,
    space: EnrichedSpace,
    quad_npts: Optional[int] = None,
    jump_terms: bool = True,
) -> AssembledSystem:
    """Galerkin system of int (D u' - 2 delta u) q' + w u q + sum [u][q]/lambda = int f q.

    ``jump_terms=False`` drops the implicit-interface coupling; it exists for diagnostics.
    """
    quad_npts = settings.DEFAULT_QUAD_POINTS if quad_npts is None else quad_npts
    points, weights = quadrature_rule(quad_npts)
    if quad_npts < space.degree + 3:
        logger.warning(
            f"{quad_npts} quadrature points may be too coarse for degree {space.degree} (recommended >= {space.degree + 3})"
        )
    for side, bc in (("left", space.bc_left), ("right", space.bc_right)):
        if not bc.is_dirichlet and bc.value != 0.0:
            raise ProblemDefinitionError(f"Nonzero Neumann data on the {side} boundary is not supported")
    if len(problem.interfaces) != len(space.enrichments):
        raise ProblemDefinitionError(
            f"Space has {len(space.enrichments)} enrichments but the problem has {len(problem.interfaces)} interfaces"
        )

    convective = problem.has_convection
    n = space.n_total
    A = np.zeros((n, n))
    F = np.zeros(n)

    for element in range(space.mesh.n_elements):
        for lo, hi in integration_cells(space, element):
            x, w = map_rule(points, weights, lo, hi)
            layer = problem.layer_of(0.5 * (lo + hi))
            dofs, N, dN = space.element_basis(element, x)

            diffusion = problem.diffusivity[layer](x) * w
            reaction = problem.reaction[layer](x) * w
            local = (dN * diffusion) @ dN.T + (N * reaction) @ N.T
            if convective:
                convection = problem.convection[layer](x) * w
                local -= 2.0 * (dN * convection) @ N.T

            A[np.ix_(dofs, dofs)] += local
            F[dofs] += N @ (problem.source[layer](x) * w)

    if jump_terms:
        for index, interface in enumerate(problem.interfaces):
            if not interface.has_jump_term:
                continue
            dofs, jump = _jump_vector(space, index)
            A[np.ix_(dofs, dofs)] += np.outer(jump, jump) / interface.lam

    free, constrained = space.free_dofs, space.constrained_dofs
    matrix = A[np.ix_(free, free)]
    rhs = F[free] - A[np.ix_(free, constrained)] @ space.lift[constrained]
    logger.debug(f"Assembled {matrix.shape[0]} x {matrix.shape[0]} system (convection: {convective})")

    for array in (matrix, rhs, A):
        array.setflags(write=False)
    return AssembledSystem(matrix=matrix, rhs=rhs, space=space, full_matrix=A)


def solve_system(system: AssembledSystem) -> np.ndarray:
    """Dense LU with partial pivoting on a private copy of the matrix."""
    A = np.array(system.matrix, dtype=float)
    b = np.array(system.rhs, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ProblemDefinitionError(f"System matrix must be square, got {A.shape}")
    if not (np.all(np.isfinite(A)) and np.all(np.isfinite(b))):
        raise ProblemDefinitionError("System contains non-finite entries")

    scale = np.max(np.abs(A)) if A.size else 0.0
    if scale == 0.0:
        raise SingularSystemError("Singular system: zero matrix (DOF 0)", dof=0)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", la.LinAlgWarning)
        lu, piv = la.lu_factor(A, check_finite=False)

    pivots = np.abs(np.diag(lu)) / scale
    weakest = int(np.argmin(pivots))
    if pivots[weakest] < PIVOT_TOLERANCE:
        raise SingularSystemError(
            f"Numerically singular system: relative pivot {pivots[weakest]:.3e} at free DOF {weakest}",
            dof=weakest,
        )

    x = la.lu_solve((lu, piv), b, check_finite=False)
    residual = np.linalg.norm(system.matrix @ x - b)
    bound = RESIDUAL_TOLERANCE * (np.linalg.norm(system.matrix) * np.linalg.norm(x) + np.linalg.norm(b))
    if residual > bound:
        logger.warning(f"Solver residual {residual:.3e} exceeds {bound:.3e}")
    else:
        logger.debug(f"Solver residual {residual:.3e}, smallest relative pivot {pivots[weakest]:.3e}")
    return x


def condition_number(matrix: np.ndarray) -> float:
    """2-norm condition number from the full set of singular values."""
    singular_values = la.svdvals(np.asarray(matrix, dtype=float))
    if singular_values[-1] == 0.0:
        return float("inf")
    return float(singular_values[0] / singular_values[-1])


def coercivity_witness(matrix: np.ndarray) -> float:
    """Smallest real part of the eigenvalues; positive for a coercive discrete form."""
    return float(np.min(la.eigvals(np.asarray(matrix, dtype=float)).real))
