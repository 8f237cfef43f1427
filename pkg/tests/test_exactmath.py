from fractions import Fraction
from math import comb, factorial as ifact

import pytest
from hypothesis import given, strategies as st

from cmvolume.exactmath import (
    approx,
    clipped_binomial,
    falling_factorial,
    format_rational,
    gen_binomial,
    gen_binomial_int,
    parse_rational,
)


def naive_binomial(z: int, k: int) -> Fraction:
    # z(z-1)...(z-k+1) / k!, straight from the definition
    if k < 0:
        return Fraction(0)
    num = 1
    for i in range(k):
        num *= z - i
    return Fraction(num, ifact(k))


@given(st.integers(-40, 40), st.integers(-5, 40))
def test_gen_binomial_matches_definition(z, k):
    assert gen_binomial(z, k) == naive_binomial(z, k)
    assert gen_binomial_int(z, k) == naive_binomial(z, k)


@given(st.integers(0, 60), st.integers(0, 60))
def test_nonnegative_upper_is_ordinary(z, k):
    assert gen_binomial_int(z, k) == comb(z, k)


def test_negative_upper_values():
    assert gen_binomial_int(-1, 5) == -1
    assert gen_binomial_int(-3, 2) == 6
    assert gen_binomial_int(-2, 3) == -4
    assert gen_binomial_int(5, -1) == 0


def test_clipped_differs_only_for_negative_upper():
    assert clipped_binomial(-3, 2) == 0
    assert clipped_binomial(6, 7) == 0
    assert clipped_binomial(6, 2) == 15


def test_falling_factorial():
    assert falling_factorial(5, 3) == 60
    assert falling_factorial(-2, 3) == -24
    assert falling_factorial(7, 0) == 1
    with pytest.raises(ValueError):
        falling_factorial(3, -1)


@pytest.mark.parametrize(
    "text, value",
    [
        ("3/10", Fraction(3, 10)),
        ("0.3", Fraction(3, 10)),
        ("-6/4", Fraction(-3, 2)),
        ("7", Fraction(7)),
        ("0.125", Fraction(1, 8)),
        ("1e-3", Fraction(1, 1000)),
    ],
)
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["", "abc", "1/0", "nan", "inf", "1/2/3"])
def test_parse_rational_rejects(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(st.fractions())
def test_format_parse_roundtrip(q):
    s = format_rational(q)
    assert parse_rational(s) == q
    assert ("/" in s) == (q.denominator != 1)


def test_approx_is_display_only():
    assert approx(Fraction(1, 2)) == "0.5"
    assert approx(Fraction(0)) == "0"
