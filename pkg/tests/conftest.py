import numpy as np
import pytest

from tspga.tour import Instance, Metric
from tspga.tsplib import load_bundled

# filled by test_acceptance, printed after the run
ACCEPTANCE_LINES = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])


@pytest.fixture(scope="session")
def eil51():
    return load_bundled("eil51")


@pytest.fixture(scope="session")
def att48():
    return load_bundled("att48")


@pytest.fixture(scope="session")
def st70():
    return load_bundled("st70")


def random_instance(n, seed, metric=Metric.EUCLIDEAN, scale=100.0):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(0, scale, size=(n, 2))
    if metric in (Metric.EUC_2D, Metric.ATT):
        pts = np.round(pts)
    return Instance(f"rand{n}_{seed}", pts.tolist(), metric)


@pytest.fixture
def square():
    return Instance("square", [(0, 0), (0, 1), (1, 1), (1, 0)], Metric.EUCLIDEAN)


@pytest.fixture
def octagon():
    """Eight points on a circle of radius 10; (0..7) is the optimal tour."""
    ang = np.arange(8) * 2 * np.pi / 8
    return Instance("octagon", np.c_[10 * np.cos(ang), 10 * np.sin(ang)].tolist(), Metric.EUCLIDEAN)
