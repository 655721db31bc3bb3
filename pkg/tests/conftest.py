import numpy as np
import pytest

from enrichfem.api.dependencies import get_orchestrator
from enrichfem.repositories.benchmarks import catalog_problem
from enrichfem.services.analysis import ExactSolution
from enrichfem.services.problem import BoundaryCondition, ProblemSpec


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def problem1():
    return catalog_problem(1)


@pytest.fixture(scope="session")
def problem2():
    return catalog_problem(2)


@pytest.fixture(scope="session")
def problem3():
    return catalog_problem(3)


@pytest.fixture
def orchestrator():
    return get_orchestrator()


@pytest.fixture
def linear_problem() -> ProblemSpec:
    """-u'' = 0 on [0, 1] with u(0) = 0, u(1) = 1 and no interfaces."""
    return ProblemSpec(
        domain=(0.0, 1.0),
        interfaces=(),
        diffusivity=(1.0,),
        convection=(0.0,),
        reaction=(0.0,),
        source=(0.0,),
        bc_left=BoundaryCondition.dirichlet(0.0),
        bc_right=BoundaryCondition.dirichlet(1.0),
        exact=ExactSolution.from_polynomials([[0.0, 1.0]], [0.0, 1.0]),
        name="linear",
    )
