import numpy as np
import pytest

from ballsep import instances

# acceptance lines collected by tests/test_acceptance.py, printed at the end of the run
ACCEPTANCE_LINES = {}


def grid(n, seed=0, spacing=2.5, d=2):
    """First ``n`` balls of a jittered grid just large enough to hold them."""
    return instances.jittered_grid(d, instances.grid_side(n, d), spacing, seed, n)


def random_lines(n, seed, spread=3.0):
    rng = np.random.default_rng(seed)
    return rng.uniform(-spread, spread, n), rng.uniform(-spread, spread, n)


@pytest.fixture
def row5():
    return instances.collinear_row(5, 3.0)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
