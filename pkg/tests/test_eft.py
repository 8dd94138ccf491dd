import math
from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from fp_armory import eft
from fp_armory.eft import DoubleWord, fast_two_sum, fma, split, two_prod, two_sum

finite = st.floats(allow_nan=False, allow_infinity=False, min_value=-1e300, max_value=1e300)


@given(finite, finite)
def test_two_sum_is_exact(a, b):
    r = two_sum(a, b)
    assert r.hi == a + b
    assert r.as_fraction() == Fraction(a) + Fraction(b)


@given(finite, finite)
def test_fast_two_sum_is_exact_when_ordered(a, b):
    if abs(a) < abs(b):
        a, b = b, a
    r = fast_two_sum(a, b)
    assert r.as_fraction() == Fraction(a) + Fraction(b)


@given(finite, finite)
def test_two_prod_is_exact_inside_guards(a, b):
    r = two_prod(a, b)
    assume(math.isfinite(r.hi))
    if r.exact:
        assert r.as_fraction() == Fraction(a) * Fraction(b)
        assert r.hi == a * b


@given(st.floats(allow_nan=False, allow_infinity=False, min_value=-1e150, max_value=1e150))
def test_split_halves(a):
    hi, lo = split(a)
    assert hi + lo == a
    assert Fraction(hi) + Fraction(lo) == Fraction(a)


def test_two_prod_split_fallback_matches():
    for a, b in ((0.1, 0.3), (1 / 3, 3.0), (2.0 ** 27 + 1, 2.0 ** 27 + 1), (-1e100, 7e-50)):
        p, lo = eft._two_prod_split(a, b)
        assert Fraction(p) + Fraction(lo) == Fraction(a) * Fraction(b)


def test_fma_single_rounding():
    a = 2.0 ** 27 + 1
    assert fma(a, a, -(2.0 ** 54 + 2.0 ** 28)) == 1.0
    assert eft._fma_exact_rational(a, a, -(2.0 ** 54 + 2.0 ** 28)) == 1.0
    assert eft._fma_exact_rational(1e308, 10.0, 0.0) == math.inf


@given(finite, finite, finite)
def test_fma_is_correctly_rounded(a, b, c):
    exact = Fraction(a) * Fraction(b) + Fraction(c)
    got = fma(a, b, c)
    assume(math.isfinite(got))
    assert got == float(exact)


def test_guard_bands_flagged():
    assert not two_sum(1e308, 1e308).exact
    assert not two_prod(1e200, 1e200).exact
    assert not two_prod(1e-200, 1e-200).exact
    assert two_prod(0.0, 5.0).exact


def test_classic_residuals():
    assert two_sum(1.0, 2.0 ** -60) == DoubleWord(1.0, 2.0 ** -60)
    assert two_sum(0.1, 0.2).lo == pytest.approx(-2.7755575615628914e-17)
    r = two_prod(0.1, 0.1)
    assert r.hi == 0.010000000000000002 and r.lo != 0
