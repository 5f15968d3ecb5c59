import random

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from hypercorr.cube import SetFamily

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@st.composite
def families(draw, n_min=1, n_max=6, increasing=False):
    n = draw(st.integers(n_min, n_max))
    if increasing:
        gens = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=2 * n))
        return SetFamily.up_closure(n, gens)
    return SetFamily(n, draw(st.integers(0, (1 << (1 << n)) - 1)))


@st.composite
def family_pairs(draw, n_min=1, n_max=6, increasing=False):
    n = draw(st.integers(n_min, n_max))
    out = []
    for _ in range(2):
        if increasing:
            gens = draw(st.lists(st.integers(0, (1 << n) - 1), max_size=2 * n))
            out.append(SetFamily.up_closure(n, gens))
        else:
            out.append(SetFamily(n, draw(st.integers(0, (1 << (1 << n)) - 1))))
    return tuple(out)


@pytest.fixture
def rng():
    return random.Random(20240517)
