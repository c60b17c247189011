import numpy as np
import pytest

from grolab.baseline import ReedsParams, solve_eta_star
from grolab.gauss import QuadratureSpec

# The lambda the quoted reference digits were computed at.
LAM = 0.197479091


@pytest.fixture(scope="session")
def params() -> ReedsParams:
    return ReedsParams.at_reeds_point(LAM)


@pytest.fixture(scope="session")
def eta_star() -> float:
    return solve_eta_star(LAM)


@pytest.fixture(scope="session")
def spec() -> QuadratureSpec:
    return QuadratureSpec()


@pytest.fixture()
def rng() -> np.random.Generator:
    return np.random.Generator(np.random.Philox(key=987654321))
