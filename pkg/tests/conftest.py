import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from distortion_lab.model import random_instance

settings.register_profile(
    "lab", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("lab")

seeds = st.integers(min_value=0, max_value=2**32 - 1)


@st.composite
def instances(draw, m_min=3, m_max=15, n_max=30, active_only=False, placement=None):
    m = draw(st.integers(m_min, m_max))
    n_lo = m if active_only else 2
    n = draw(st.integers(n_lo, max(n_lo, n_max)))
    place = placement or draw(st.sampled_from(["uniform", "clustered", "collocated"]))
    return random_instance(draw(seeds), n, m, place, active_only=active_only)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


# acceptance criteria report ---------------------------------------------------

ACCEPTANCE_LINES = {}


@pytest.fixture
def criterion():
    """Record one pass/fail line per acceptance criterion for the terminal summary."""

    def record(number, passed, detail):
        key = str(number)
        status = "PASS" if passed else "FAIL"
        ACCEPTANCE_LINES[key] = f"criterion {key:<3} {status}  {detail}"
        print(ACCEPTANCE_LINES[key])
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")

    def order(key):
        head, _, tail = key.partition(".")
        return (int(head), tail)

    for key in sorted(ACCEPTANCE_LINES, key=order):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
