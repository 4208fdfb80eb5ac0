import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import q3, small_fraction
from turnover_cusps.errors import FieldMismatchError, InvalidInputError
from turnover_cusps.field import (
    ExactAngle,
    QuadraticNumber,
    exact_cos_sin,
    format_scalar,
    parse_scalar,
    turn,
)

S3 = QuadraticNumber.sqrt(3)


def test_zero_iff_both_parts_zero():
    assert not QuadraticNumber(0, 0, 3)
    assert QuadraticNumber(0, Fraction(1, 10**9), 3)
    assert QuadraticNumber(0, 0, 3).d == 1  # rationals are normalised


def test_sqrt_squares_to_d():
    assert S3 * S3 == 3
    assert QuadraticNumber.sqrt(2) ** 2 == 2


def test_division_rationalises():
    assert (1 + S3) / (1 - S3) == QuadraticNumber(-2, -1, 3)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        S3 + QuadraticNumber.sqrt(2)


def test_non_squarefree_rejected():
    with pytest.raises(InvalidInputError):
        QuadraticNumber(0, 1, 4)


@given(q3(), q3(), q3())
def test_ring_axioms(x, y, z):
    assert (x + y) + z == x + (y + z)
    assert (x * y) * z == x * (y * z)
    assert x * (y + z) == x * y + x * z
    assert x - x == 0


@given(q3())
def test_inverse(x):
    if x:
        assert x * x.inverse() == 1


@given(q3(), q3())
def test_exact_order_matches_float(x, y):
    if abs(float(x) - float(y)) > 1e-9:
        assert (x < y) == (float(x) < float(y))


@given(q3())
def test_format_parse_roundtrip(x):
    assert parse_scalar(format_scalar(x)) == x


@pytest.mark.parametrize(
    "text,value",
    [
        ("3", QuadraticNumber(3)),
        ("-1/2", QuadraticNumber(Fraction(-1, 2))),
        ("sqrt3", S3),
        ("-sqrt3", -S3),
        ("1/2*sqrt3", S3 / 2),
        ("-1/2+1/2*sqrt3", QuadraticNumber(Fraction(-1, 2), Fraction(1, 2), 3)),
        ("1-sqrt2", 1 - QuadraticNumber.sqrt(2)),
    ],
)
def test_parse_examples(text, value):
    assert parse_scalar(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "sqrtx", "1**sqrt3"])
def test_parse_rejects(bad):
    with pytest.raises(InvalidInputError):
        parse_scalar(bad)


def test_format_shape():
    assert format_scalar(QuadraticNumber(Fraction(-1, 2), Fraction(1, 2), 3)) == "-1/2+1/2*sqrt3"
    assert format_scalar(QuadraticNumber(0, -1, 3)) == "-sqrt3"


def test_third_turn_rotation_entries():
    # cos(2pi/3) = -1/2 and sin(2pi/3) = sqrt3/2, exactly
    c, s = exact_cos_sin(turn(1, 3))
    assert c == Fraction(-1, 2)
    assert s == S3 / 2


@given(st.integers(0, 11))
def test_twelfths_pythagoras(k):
    c, s = exact_cos_sin(turn(k, 12))
    assert c * c + s * s == 1
    assert abs(float(c) - math.cos(float(turn(k, 12)))) < 1e-15


@given(st.sampled_from([1, 3, 5, 7]))
def test_odd_eighths(k):
    c, s = exact_cos_sin(turn(k, 8))
    assert c * c + s * s == 1
    assert c.d == 2


def test_unsupported_angle():
    with pytest.raises(InvalidInputError):
        exact_cos_sin(turn(1, 5))


def test_angle_arithmetic():
    assert turn(1, 3) + turn(2, 3) == ExactAngle(0)
    assert -turn(1, 3) == turn(2, 3)


@given(small_fraction)
def test_rationals_are_d1(f):
    assert QuadraticNumber(f).is_rational()
