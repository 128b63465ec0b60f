import pytest

from lwsw.fixed_point import petviashvili_solve
from lwsw.grid import SpectralGrid
from lwsw.model import reference_params, sech2_profile
from lwsw.variational import weinstein_minimize


@pytest.fixture(scope="session")
def grid():
    return SpectralGrid(40.0, 1024)


@pytest.fixture(scope="session")
def exact(grid):
    return sech2_profile(grid)


@pytest.fixture(scope="session")
def exact3(grid):
    return sech2_profile(grid, n=3)


@pytest.fixture(scope="session")
def petviashvili_ref(grid):
    return petviashvili_solve(reference_params(1), grid)


@pytest.fixture(scope="session")
def weinstein_ref(grid):
    return weinstein_minimize(reference_params(1), grid)
