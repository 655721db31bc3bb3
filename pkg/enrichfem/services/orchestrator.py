import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from enrichfem import __version__
from enrichfem.adapters.base import BaseReportAdapter
from enrichfem.core.config import settings
from enrichfem.core.exceptions import InputError, MeshError, ReportFormatError
from enrichfem.repositories.benchmarks import BenchmarkProblem, ReferenceRow
from enrichfem.schemas.models import ConvergenceRow, ConvergenceTable, ErrorReport, TableMetadata
from enrichfem.services.analysis import ExactSolution, compute_errors, observed_orders
from enrichfem.services.assembly import (
    AssembledSystem,
    assemble_system,
    coercivity_witness,
    condition_number,
    solve_system,
)
from enrichfem.services.enrichment import build_enrichment
from enrichfem.services.femspace import EnrichedSpace, build_space
from enrichfem.services.mesh import Mesh1D, build_mesh
from enrichfem.services.parsers import resolve_problem
from enrichfem.services.problem import ProblemSpec

logger = logging.getLogger("service.orchestrator")

FORMAT_ALIASES = {"markdown": "md"}


@dataclass(frozen=True)
class Solution:
    space: EnrichedSpace
    system: AssembledSystem
    coeffs: np.ndarray
    errors: Optional[ErrorReport]


def problem_mesh(problem: ProblemSpec, n: int) -> Mesh1D:
    a, b = problem.domain
    return build_mesh(a, b, n, [interface.alpha for interface in problem.interfaces])


def problem_space(problem: ProblemSpec, n: int, degree: int) -> EnrichedSpace:
    """Uniform mesh with n elements and one enrichment per interface of the problem."""
    mesh = problem_mesh(problem, n)
    enrichments = []
    for hit in mesh.interface_hits:
        x_k, x_k1 = mesh.element_bounds(hit.element)
        gamma = problem.interface_gamma(hit.interface)
        enrichments.append(build_enrichment(x_k, x_k1, hit.alpha, gamma, element=hit.element))
    return build_space(mesh, degree, enrichments, problem.bc_left, problem.bc_right)


def solve_problem(
    problem: ProblemSpec,
    n: int,
    degree: int = 1,
    quad_npts: Optional[int] = None,
    exact: Optional[ExactSolution] = None,
    with_cond: bool = False,
) -> Solution:
    space = problem_space(problem, n, degree)
    system = assemble_system(problem, space, quad_npts)
    coeffs = solve_system(system)
    exact = exact or problem.exact
    errors = compute_errors(exact, space, coeffs, quad_npts) if exact is not None else None
    if errors is not None and with_cond:
        errors = errors.model_copy(update={"cond": condition_number(system.matrix)})
    return Solution(space=space, system=system, coeffs=coeffs, errors=errors)


def _element_count(problem: ProblemSpec, h: Fraction) -> int:
    a, b = problem.domain
    length = Fraction(b - a).limit_denominator(1 << 30)
    n = length / h
    if n.denominator != 1:
        raise InputError(f"Mesh size {h} does not divide the domain length {b - a}")
    return int(n)


def _pairwise_orders(h_list: Sequence[float], e_list: Sequence[float]) -> List[Optional[float]]:
    """Order per refinement step; None where either error is exactly zero."""
    orders: List[Optional[float]] = []
    for i in range(len(h_list) - 1):
        pair = e_list[i : i + 2]
        if min(pair) == 0.0:
            logger.warning(f"Zero error between levels {i} and {i + 1}; order left undefined")
            orders.append(None)
        else:
            orders.extend(observed_orders(h_list[i : i + 2], pair))
    return orders


class StudyOrchestrator:
    def __init__(self, adapters: Dict[str, BaseReportAdapter]):
        self.adapters = adapters

    def plan_levels(self, problem: ProblemSpec, h0: Fraction, levels: int, factor: int) -> List[Tuple[Fraction, int]]:
        """Mesh size and element count for every level, checked against the interfaces before any solve."""
        if levels < 1:
            raise InputError(f"At least one refinement level is needed, got {levels}")
        if factor < 2:
            raise InputError(f"Refinement factor must be >= 2, got {factor}")

        plan = []
        for level in range(levels):
            h = h0 / factor**level
            n = _element_count(problem, h)
            try:
                problem_mesh(problem, n)
            except MeshError as e:
                raise MeshError(f"Level {level} (h={h}, n={n}): {e}") from e
            plan.append((h, n))
        return plan

    def _run_level(
        self,
        level: int,
        problem: ProblemSpec,
        exact: ExactSolution,
        h: Fraction,
        n: int,
        degree: int,
        with_cond: bool,
        quad_npts: int,
    ) -> ConvergenceRow:
        solution = solve_problem(problem, n, degree, quad_npts, exact, with_cond)
        errors = solution.errors
        if with_cond and problem.has_convection:
            witness = coercivity_witness(solution.system.matrix)
            if witness <= 0:
                logger.warning(f"Level {level}: smallest eigenvalue real part {witness:.3e} is not positive")
            else:
                logger.debug(f"Level {level}: smallest eigenvalue real part {witness:.3e}")

        logger.info(
            f"Level {level}: h={h}, dofs={solution.space.n_free}, "
            f"l2={errors.l2:.5e}, h1={errors.h1_broken:.5e}, nodal={errors.nodal_max:.5e}"
        )
        return ConvergenceRow(
            h=float(h),
            n_elements=n,
            n_dofs=solution.space.n_free,
            l2=errors.l2,
            h1_broken=errors.h1_broken,
            nodal=errors.nodal_max,
            cond=errors.cond,
        )

    def run_convergence(
        self,
        problem: Union[BenchmarkProblem, str, int],
        degree: Optional[int] = None,
        h0: Optional[Fraction] = None,
        levels: Optional[int] = None,
        with_cond: bool = False,
        quad_npts: Optional[int] = None,
        factor: Optional[int] = None,
    ) -> ConvergenceTable:
        benchmark = problem if isinstance(problem, BenchmarkProblem) else resolve_problem(str(problem))
        exact = benchmark.exact or benchmark.problem.exact
        if exact is None:
            raise InputError(f"Problem '{benchmark.problem.name}' has no exact solution; errors cannot be measured")

        degree = degree or benchmark.degree
        h0 = Fraction(h0 if h0 is not None else settings.DEFAULT_H0)
        levels = settings.DEFAULT_LEVELS if levels is None else levels
        quad_npts = settings.DEFAULT_QUAD_POINTS if quad_npts is None else quad_npts
        factor = settings.REFINEMENT_FACTOR if factor is None else factor

        plan = self.plan_levels(benchmark.problem, h0, levels, factor)
        logger.info(f"Convergence study: problem {benchmark.id or benchmark.problem.name}, P{degree}, n={[n for _, n in plan]}")

        with ThreadPoolExecutor(max_workers=max(1, min(settings.MAX_WORKERS, levels))) as pool:
            rows = list(pool.map(
                lambda item: self._run_level(item[0], benchmark.problem, exact, *item[1], degree, with_cond, quad_npts),
                enumerate(plan),
            ))

        h_list = [row.h for row in rows]
        orders = {
            "order_l2": _pairwise_orders(h_list, [row.l2 for row in rows]),
            "order_h1": _pairwise_orders(h_list, [row.h1_broken for row in rows]),
            "order_nodal": _pairwise_orders(h_list, [row.nodal for row in rows]),
        }

        metadata = TableMetadata(
            problem=str(benchmark.id) if benchmark.id else benchmark.problem.name,
            degree=degree,
            quad_points=quad_npts,
            refinement_factor=factor,
            h0=str(h0),
            levels=levels,
            timestamp=datetime.now(timezone.utc).isoformat(timespec="seconds"),
            version=__version__,
        )
        return ConvergenceTable(metadata=metadata, rows=rows, **orders)

    def emit_report(
        self,
        table: ConvergenceTable,
        format: str,
        reference: Optional[Sequence[ReferenceRow]] = None,
    ) -> str:
        key = FORMAT_ALIASES.get(format, format)
        adapter = self.adapters.get(key)
        if adapter is None:
            valid = ", ".join(sorted(self.adapters) + sorted(FORMAT_ALIASES))
            raise ReportFormatError(f"Unknown report format '{format}'; valid formats: {valid}")
        return adapter.render(table, tuple(reference) if reference else None)
