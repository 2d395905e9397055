import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_collinear_pair(rng, max_speed=0.95):
    """Two velocities along a common random axis (parallel or antiparallel)."""
    axis = rng.normal(size=3)
    axis /= np.linalg.norm(axis)
    s1, s2 = rng.uniform(-max_speed, max_speed, size=2)
    return s1 * axis, s2 * axis


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
