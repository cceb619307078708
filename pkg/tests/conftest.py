import pytest
from fractions import Fraction

from schmidtlab.beta_shift import BetaSystem
from schmidtlab.map_models import BetaMap, GaussMap, IntegerBaseMap
from schmidtlab.numeric import AlgebraicField


@pytest.fixture(scope="session")
def golden_field():
    return AlgebraicField.from_root_in([-1, -1, 1], 1, 2)


@pytest.fixture(scope="session")
def golden_system():
    return BetaSystem("11")


@pytest.fixture(scope="session")
def f2():
    return IntegerBaseMap(2)


@pytest.fixture(scope="session")
def f3():
    return IntegerBaseMap(3)


@pytest.fixture(scope="session")
def gauss():
    return GaussMap()


@pytest.fixture(scope="session")
def golden_map():
    return BetaMap("11")


@pytest.fixture(scope="session")
def inverse_golden_field():
    # root (sqrt(5)-1)/2 of x^2 + x - 1
    return AlgebraicField.from_root_in([-1, 1, 1], 0, 1)


def pytest_addoption(parser):
    parser.addoption(
        "--acceptance-fast",
        action="store_true",
        default=False,
        help="shrink the acceptance batch sizes (for development only)",
    )
