"""
Shared fixtures and the --runslow switch.
"""
import numpy as np
import pytest

from core.distributions import FiniteDist, make_finite_dist


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help='run tests marked slow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason='needs --runslow')
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture
def three_point() -> FiniteDist:
    return make_finite_dist([0.5, 1.0, 3.0], [0.5, 0.3, 0.2])


@pytest.fixture
def unit_two_point() -> FiniteDist:
    """Atoms 0.2 and 1 with P(X = 1) = 0.1."""
    return make_finite_dist([0.2, 1.0], [0.9, 0.1])


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)
