import numpy as np
import pytest
from hypothesis import settings, strategies as st

settings.register_profile("default", deadline=None, max_examples=40)
settings.load_profile("default")


def cvec(n, rng, scale=1.0):
    return scale * (rng.normal(size=n) + 1j * rng.normal(size=n))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


finite = st.floats(-2.0, 2.0, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


def coeff_lists(min_size=1, max_size=12):
    return st.lists(complexes, min_size=min_size, max_size=max_size)


# one line per acceptance criterion, echoed after the run so it survives output capture
ACCEPTANCE = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
