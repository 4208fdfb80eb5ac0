import csv
import io
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from turnover_cusps.character import (
    BASE_POINT,
    CSV_COLUMNS,
    OFF_SURFACE,
    S1,
    S2,
    SL3_BLOCK,
    SL4_MINUS_ONE,
    classify_component,
    conjugate_tau,
    cyclic_canonical_form,
    cyclic_rotations,
    diagonal_to_traces,
    fiber_sizes,
    sample_surface,
    singular_locus_check,
    surface_gradient,
    surface_point,
    surface_polynomial,
    tau_roots_symmetric,
    trace_coordinates,
    write_csv,
)
from turnover_cusps.errors import DomainError, UnsupportedReductionError
from turnover_cusps.holonomy import (
    custom_representation,
    diagonal_representation,
    hyperbolic_cusp_holonomy,
    slice_representation,
)
from turnover_cusps.isolated import block_sum

nonzero = st.fractions(min_value=-6, max_value=6, max_denominator=7).filter(lambda f: f != 0)


@pytest.fixture(scope="module")
def grid():
    return sample_surface()


def test_diagonal_example():
    assert diagonal_to_traces(2, 1, Fraction(1, 2)) == (Fraction(7, 2), Fraction(7, 2), 5)
    assert conjugate_tau(2, 1, Fraction(1, 2)) == Fraction(17, 4)
    assert isinstance(conjugate_tau(2, 1, Fraction(1, 2)), Fraction)


@given(nonzero, nonzero)
def test_surface_identity(x1, x2):
    x3 = 1 / (x1 * x2)
    r, s, tau = diagonal_to_traces(x1, x2, x3)
    assert surface_polynomial(r, s, tau) == 0
    ssum, sprod = tau_roots_symmetric(r, s)
    t2 = conjugate_tau(x1, x2, x3)
    assert tau + t2 == ssum and tau * t2 == sprod
    assert surface_polynomial(r, s, t2) == 0


@given(nonzero, nonzero)
def test_cyclic_invariance(x1, x2):
    x3 = 1 / (x1 * x2)
    vals = {diagonal_to_traces(*t) for t in cyclic_rotations((x1, x2, x3))}
    assert len(vals) == 1
    assert cyclic_canonical_form(x1, x2, x3) == min(cyclic_rotations((x1, x2, x3)))


def test_trace_coordinates_match_closed_form():
    rep = diagonal_representation(2, 1, Fraction(1, 2))
    tc = trace_coordinates(rep)
    assert tc.source == SL3_BLOCK
    assert tc.rst == diagonal_to_traces(2, 1, Fraction(1, 2))
    # rho(a) = P3 has trace 0 on the block
    assert tc.x == 0 and tc.u == 0


def test_trace_coordinates_hyperbolic():
    tc = trace_coordinates(hyperbolic_cusp_holonomy())
    assert tc.source == SL4_MINUS_ONE
    assert tc.rst == BASE_POINT


def test_trace_coordinates_float_slice():
    tc = trace_coordinates(slice_representation(0.0, 0.0))
    assert tc.source == SL4_MINUS_ONE
    assert all(abs(float(c) - 3) < 1e-9 for c in tc.rst)
    assert set(tc.as_dict()) == {"x", "y", "z", "u", "v", "w", "r", "s", "tau", "source"}


def test_trace_coordinates_reject_irreducible_blocks():
    r = block_sum((1, 2))
    with pytest.raises(UnsupportedReductionError):
        trace_coordinates(custom_representation(r, r))


def test_singular_point():
    assert surface_gradient(*BASE_POINT) == (0, 0, 0)
    assert surface_polynomial(*BASE_POINT) == 0


def test_grid_shape(grid):
    assert len(grid) == 200
    assert all(p.residual == 0 for p in grid)


def test_regular_off_base_point(grid):
    report = singular_locus_check(grid)
    assert report.passed
    assert report.flagged == (BASE_POINT,)
    for p in grid:
        if p.rst != BASE_POINT:
            assert sum(float(c) ** 2 for c in p.gradient) ** 0.5 > 1e-6


def test_components(grid):
    for p in grid:
        assert p.component == (S1 if all(x > 0 for x in p.x) else S2)


def test_components_other_sign_patterns():
    pts = sample_surface(sign_patterns=("+-", "-+"))
    assert {p.component for p in pts} == {S2}


def test_classify_off_surface():
    assert classify_component(0, 0, 0) == OFF_SURFACE
    assert classify_component(3, 3, 3) == S1
    assert classify_component(3.0 + 1e-12, 3.0, 3.0) == S1


def test_cyclic_action_free_except_base(grid):
    for p in grid:
        if p.x != (1, 1, 1):
            assert len(set(cyclic_rotations(p.x))) == 3


def test_fibers_are_three_to_one(grid):
    sizes = fiber_sizes([p.x for p in grid])
    assert sizes[BASE_POINT] == 1
    assert {v for k, v in sizes.items() if k != BASE_POINT} == {3}


def test_domain_checks():
    with pytest.raises(DomainError):
        diagonal_to_traces(2, 2, 2)
    with pytest.raises(DomainError):
        sample_surface(sign_patterns=("+x",))
    with pytest.raises(DomainError):
        sample_surface(magnitudes=(0, 1))


def test_csv_format(grid):
    text = write_csv(grid[:3])
    rows = list(csv.reader(io.StringIO(text)))
    assert tuple(rows[0]) == CSV_COLUMNS
    assert rows[1] == ["1/4", "1/4", "16", "1/4", "1/4", "16", "129/16", "33/2", "4161/64", "0", "S1"]


def test_csv_float_precision():
    p = surface_point(0.5, 2.0, 1.0)
    row = p.csv_row()
    assert row[6] == format(float(p.r), ".17g")
    assert float(row[6]) == p.r
    pts = sample_surface(magnitudes=(Fraction(1, 3), 3), exact=False)
    for q in pts:
        assert float(q.csv_row()[0]) == q.x[0]


def test_surface_polynomial_at_diagonal_example():
    assert surface_polynomial(Fraction(7, 2), Fraction(7, 2), 5) == 0
    assert surface_polynomial(3.5, 3.5, 5.0) == 0.0
    assert classify_component(-1, -1, -1) == S2
    assert surface_gradient(Fraction(7, 2), Fraction(7, 2), 5) != (0, 0, 0)
    assert surface_gradient(-1, -1, -1) != (0, 0, 0)
