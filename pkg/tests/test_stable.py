import math
import random
from fractions import Fraction

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from fp_armory import stable
from fp_armory.errors import DomainError, NonTriangleError, UsageError
from fp_armory.formats import BINARY32, TOWARD_ZERO, arithmetic, parse_format
from fp_armory.oracle import correct_digits, error_ulps, sqrt_rational

DEC3 = parse_format("toy:10,3,-20,20")


# ---------------------------------------------------------------- cancellation


def test_toy_difference_of_squares():
    A = arithmetic(DEC3)
    a, b = A.coerce("3.34"), A.coerce("3.33")
    assert stable.diff_squares_naive(a, b, A) == Fraction(1, 10)
    assert stable.diff_squares_factored(a, b, A) == Fraction(667, 10000)


def test_binary32_difference_of_squares_overflow():
    a, b = 2e19, 1.9e19
    A = arithmetic(BINARY32)
    a, b = A.coerce(a), A.coerce(b)
    assert math.isnan(stable.diff_squares_naive(a, b, A))
    factored = stable.diff_squares_factored(a, b, A)
    exact = Fraction(a) ** 2 - Fraction(b) ** 2
    assert error_ulps(factored, exact, BINARY32) <= 2


# ---------------------------------------------------------------- quadratic


def test_quadratic_cancellation_example():
    exact = stable.exact_quadratic_roots(1, 1e8, 1)
    robust = stable.quadratic_robust(1, 1e8, 1)
    naive = stable.quadratic_naive(1, 1e8, 1)
    assert robust.kind == naive.kind == "two_real"
    assert error_ulps(robust.small, exact[1]) <= 1
    assert correct_digits(naive.small, exact[1]) < 1
    assert error_ulps(robust.large, exact[0]) <= 1


def test_quadratic_kinds():
    assert stable.quadratic_robust(1, 2, 1).kind == "double_real"
    r = stable.quadratic_robust(1, 0, 1)
    assert r.kind == "complex_pair" and r.roots == (0.0, 1.0)
    with pytest.raises(UsageError):
        r.small
    with pytest.raises(UsageError):
        stable.quadratic_robust(0, 1, 1)


def test_discriminant_eft_beats_naive():
    # b^2 and 4ac agree in their leading 53 bits
    a, b, c = 1.0, 2.0 ** 27 + 1, 2.0 ** 52 + 2.0 ** 26
    exact = Fraction(b) ** 2 - 4 * Fraction(a) * Fraction(c)
    assert stable.discriminant_eft(a, b, c) == exact
    assert stable.discriminant_naive(a, b, c) != exact


coefficient = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False).filter(
    lambda v: abs(v) > 1e-6)


@settings(max_examples=300)
@given(coefficient, coefficient, coefficient)
def test_robust_quadratic_within_two_ulps(a, b, c):
    exact = stable.exact_quadratic_roots(a, b, c)
    assume(exact is not None and exact[0] != exact[1])
    roots = stable.quadratic_robust(a, b, c)
    assume(roots.kind == "two_real")
    for got, want in zip(roots.roots, exact):
        assert error_ulps(got, want) <= 2


def test_quadratic_other_contexts():
    r = stable.quadratic_robust(1, 1e8, 1, arithmetic(None, TOWARD_ZERO))
    exact = stable.exact_quadratic_roots(1, 1e8, 1)
    assert error_ulps(r.small, exact[1]) <= 2
    A = arithmetic(DEC3)
    r = stable.quadratic_robust(A.coerce(1), A.coerce(-634), A.coerce(2), A)
    assert r.small == Fraction("0.00315")


# ---------------------------------------------------------------- triangles


def test_triangle_validation():
    with pytest.raises(NonTriangleError):
        stable.area_kahan((1.0, 2.0, 5.0))
    with pytest.raises(DomainError):
        stable.heron_naive((1.0, -2.0, 2.0))
    assert stable.area_kahan((1.0, 1.0, 2.0)) == 0.0


def test_right_triangle():
    assert stable.area_kahan((3.0, 4.0, 5.0)) == 6.0
    assert stable.heron_naive((5.0, 3.0, 4.0)) == 6.0


def test_needle_triangle():
    sides = (100000.0, 99999.99979, 0.00029)
    exact = stable.exact_area(sides)
    assert error_ulps(stable.area_kahan(sides), exact) < 1
    assert error_ulps(stable.heron_naive(sides), exact) > 100


@settings(max_examples=200)
@given(st.floats(min_value=1, max_value=1e6), st.floats(min_value=0, max_value=1),
       st.floats(min_value=0, max_value=1))
def test_kahan_area_accuracy(a, s, t):
    b = a * (0.5 + 0.5 * s)
    c_min, c_max = a - b, b
    c = c_min + (c_max - c_min) * t
    assume(c > a * 1e-15)  # keep the product clear of underflow
    try:
        sides = stable.TriangleSides.of(a, b, c)
    except NonTriangleError:
        return
    exact = stable.exact_area(sides)
    assume(exact > 0)
    assert error_ulps(stable.area_kahan(sides), exact) <= 3


# ---------------------------------------------------------------- complex


def test_complex_abs_overflow_binary32():
    A = arithmetic(BINARY32)
    re, im = A.coerce(3e19), A.coerce(4e19)
    assert stable.complex_abs_naive(re, im, A) == math.inf
    robust = stable.complex_abs_robust(re, im, A)
    exact = sqrt_rational(Fraction(re) ** 2 + Fraction(im) ** 2)
    assert error_ulps(robust, exact, BINARY32) <= 2


@settings(max_examples=300)
@given(st.floats(min_value=-1e300, max_value=1e300, allow_nan=False),
       st.floats(min_value=-1e300, max_value=1e300, allow_nan=False))
def test_complex_abs_robust_accuracy(re, im):
    exact = sqrt_rational(Fraction(re) ** 2 + Fraction(im) ** 2)
    got = stable.complex_abs_robust(re, im)
    if exact == 0:
        assert got == 0
    else:
        assert error_ulps(got, exact) <= 2


@settings(max_examples=300)
@given(*[st.floats(min_value=-1e200, max_value=1e200, allow_nan=False)] * 4)
def test_complex_div_robust_accuracy(ar, ai, br, bi):
    den = Fraction(br) ** 2 + Fraction(bi) ** 2
    assume(den != 0)
    re_exact = (Fraction(ar) * Fraction(br) + Fraction(ai) * Fraction(bi)) / den
    im_exact = (Fraction(ai) * Fraction(br) - Fraction(ar) * Fraction(bi)) / den
    re, im = stable.complex_div_robust(ar, ai, br, bi)
    for got, want in ((re, re_exact), (im, im_exact)):
        assume((1e-290 < abs(want) < 1.7e308) or want == 0)
        if want == 0:
            assert got == 0
        else:
            assert error_ulps(got, want) <= 1


def test_complex_div_specials():
    re, im = stable.complex_div_robust(0.0, 0.0, 0.0, 0.0)
    assert math.isnan(re) and math.isnan(im)
    naive = stable.complex_div_naive(1e300, 1e300, 1e300, 1e300)
    assert math.isnan(naive[0])
    assert stable.complex_div_robust(1e300, 1e300, 1e300, 1e300) == (1.0, 0.0)


# ---------------------------------------------------------------- Rump


def test_rump():
    naive = stable.rump_expression(77617.0, 33096.0)
    exact = stable.exact_rump(77617, 33096)
    assert exact == Fraction(-54767, 66192)
    assert abs(naive) > 1e20
    assert stable.rump_expression(1.0, 1.0) == float(stable.exact_rump(1, 1)) == 226.75
    with pytest.raises(UsageError):
        stable.rump_expression(1.0, 0.0)


def test_rump_random_inputs_match_exact_for_small_arguments():
    rng = random.Random(5)
    for _ in range(50):
        a, b = rng.randint(1, 20), rng.randint(1, 20)
        assert stable.rump_expression(float(a), float(b)) == pytest.approx(
            float(stable.exact_rump(a, b)), rel=1e-12)
