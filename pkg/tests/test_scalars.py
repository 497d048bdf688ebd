import math
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cdvlab.scalars import ZERO, ONE, FieldScalar, FieldTagError, parse_scalar

rationals = st.fractions(
    min_value=-50, max_value=50, max_denominator=12
)


def quad(q):
    return st.builds(lambda a, b: FieldScalar(a, b, q), rationals, rationals)


def test_sign_examples():
    assert FieldScalar(Fraction(3), Fraction(-2), 2).sign() == 1  # 9 > 8
    assert FieldScalar(Fraction(1), Fraction(-1), 2).sign() == -1
    assert ZERO.sign() == 0


def test_canonical_rational_drops_tag():
    assert FieldScalar(Fraction(1), Fraction(0), 7) == ONE
    assert FieldScalar(Fraction(1), Fraction(0), 7).q is None


def test_square_tag_rejected():
    with pytest.raises(FieldTagError):
        FieldScalar(Fraction(0), Fraction(1), 9)


def test_mixed_tags_rejected():
    with pytest.raises(FieldTagError):
        FieldScalar.sqrt_of(2) + FieldScalar.sqrt_of(3)


@given(quad(3), quad(3))
def test_sign_multiplicative(x, y):
    assert (x * y).sign() == x.sign() * y.sign()


@given(quad(5))
def test_sign_antipodal(x):
    assert x.sign() * (-x).sign() in (0, -1)


@given(quad(2))
def test_sign_matches_float(x):
    val = float(x)
    if abs(val) > 1e-9:
        assert x.sign() == (1 if val > 0 else -1)


@given(quad(7), quad(7))
def test_field_inverse(x, y):
    if not x.is_zero():
        assert (y / x) * x == y
        assert x * x.inverse() == ONE


@given(quad(11))
def test_parse_round_trip(x):
    assert parse_scalar(str(x)) == x


def test_parse_forms():
    assert parse_scalar("3/4") == FieldScalar(Fraction(3, 4))
    assert parse_scalar("-sqrt(2)") == FieldScalar(Fraction(0), Fraction(-1), 2)
    assert parse_scalar("1/2-3/4*sqrt(2)") == FieldScalar(Fraction(1, 2), Fraction(-3, 4), 2)
    assert parse_scalar("2*sqrt(3)") == FieldScalar(Fraction(0), Fraction(2), 3)


def test_abs_and_comparison():
    a = FieldScalar(Fraction(0), Fraction(1), 2)  # sqrt(2)
    b = FieldScalar(Fraction(3, 2))
    assert a < b  # sqrt(2) < 1.5
    assert abs(-a) == a
    assert float(a) == pytest.approx(math.sqrt(2))
