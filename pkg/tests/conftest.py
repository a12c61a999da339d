import os
import sys

import pytest

# Add project root to path
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.exact_geometry import Instance  # noqa: E402

GOLDEN_DIR = os.path.join(os.path.dirname(__file__), 'golden')


def pytest_addoption(parser):
    parser.addoption('--runslow', action='store_true', default=False, help="run corpus-scale checks")


def pytest_configure(config):
    config.addinivalue_line('markers', 'slow: corpus-scale check, needs --runslow')


def pytest_collection_modifyitems(config, items):
    if config.getoption('--runslow'):
        return
    skip_slow = pytest.mark.skip(reason="needs --runslow")
    for item in items:
        if 'slow' in item.keywords:
            item.add_marker(skip_slow)


# ========================================
# SHARED INSTANCES
# ========================================

@pytest.fixture
def hand_checked():
    """Three hull points and one point inside, z at the origin."""
    return Instance.from_coordinates(2, [[0, 2], [-2, -1], [3, -1], [1, 0]], [0, 0])


@pytest.fixture
def triangle():
    return Instance.from_coordinates(2, [[0, 2], [-2, -1], [3, -1]], [0, 0])


@pytest.fixture
def segment():
    return Instance.from_coordinates(1, [[-2], [5]], [0])


@pytest.fixture
def avoiding_pair():
    return Instance.from_coordinates(2, [[1, 1], [2, 3]], [0, 0])
