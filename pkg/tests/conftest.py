import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from coopnav.grid import BinaryGrid, GridGeometry

settings.register_profile("default", deadline=None, max_examples=60)
settings.load_profile("default")


def random_obstacles(rng: np.random.Generator, n: int, density: float, keep=()) -> BinaryGrid:
    """Seeded random obstacle grid; cells in ``keep`` are forced free."""
    values = (rng.random((n, n)) < density).astype(np.uint8)
    for a, b in keep:
        values[a - 1, b - 1] = 0
    return BinaryGrid(GridGeometry(n, 1.0), values)


def cells(n: int):
    return st.tuples(st.integers(1, n), st.integers(1, n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


# one line per acceptance criterion, echoed in the terminal summary
ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES, key=lambda k: (int(k.rstrip("abc")), k)):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
