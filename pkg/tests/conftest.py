from fractions import Fraction

import numpy as np
import pytest
from hypothesis import settings
from hypothesis import strategies as st

from turnover_cusps.field import QuadraticNumber
from turnover_cusps.linalg import Matrix

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

small_fraction = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def q3(draw):
    return QuadraticNumber(draw(small_fraction), draw(small_fraction), 3)


@st.composite
def rational_matrix(draw, n=4):
    rows = [[draw(st.integers(-3, 3)) for _ in range(n)] for _ in range(n)]
    return Matrix(rows)


@st.composite
def unimodular_exact(draw):
    """Product of elementary matrices with entries in Q(sqrt 3); det = 1 exactly."""
    m = Matrix.identity(4)
    for _ in range(draw(st.integers(1, 5))):
        i, j = draw(st.sampled_from([(i, j) for i in range(4) for j in range(4) if i != j]))
        c = draw(q3())
        rows = [[1 if a == b else 0 for b in range(4)] for a in range(4)]
        rows[i][j] = c
        m = m @ Matrix(rows)
    return m


@pytest.fixture
def rng():
    return np.random.default_rng(20260501)


HALF = Fraction(1, 2)
SQRT3_HALF = QuadraticNumber(0, HALF, 3)


# ---------------------------------------------------------------------------
# acceptance criteria summary: one line per criterion, built from real outcomes

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion covered by the test")


def pytest_runtest_makereport(item, call):
    marker = item.get_closest_marker("criterion")
    if marker is None or call.when != "call":
        return
    number, title = marker.args
    entry = _CRITERIA.setdefault(number, {"title": title, "passed": 0, "failed": []})
    if call.excinfo is None:
        entry["passed"] += 1
    else:
        entry["failed"].append(item.name)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        e = _CRITERIA[number]
        total = e["passed"] + len(e["failed"])
        status = "PASS" if not e["failed"] else "FAIL"
        line = f"criterion {number:>2} {status}: {e['title']} ({e['passed']}/{total} tests passed)"
        if e["failed"]:
            line += " failing: " + ", ".join(e["failed"])
        terminalreporter.write_line(line)
