import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fp_armory import summation as S
from fp_armory.errors import UsageError
from fp_armory.formats import BINARY16, BINARY32, BINARY64, parse_format
from fp_armory.oracle import exact_sum, relative_error

values = st.lists(st.floats(min_value=-1e10, max_value=1e10, allow_nan=False), max_size=60)


def test_kahan_misses_what_neumaier_catches():
    xs = [1.0, 1e100, 1.0, -1e100]
    assert S.sum_naive(xs) == 0.0
    assert S.sum_kahan(xs) == 0.0
    assert S.sum_neumaier(xs) == 2.0


def test_empty_and_single():
    for method in S.METHODS:
        f = S.summation_function(method)
        assert f([]) == 0.0
        assert f([3.5]) == 3.5


def test_unknown_method():
    with pytest.raises(UsageError):
        S.summation_function("magic")


@settings(max_examples=200)
@given(values)
def test_compensated_error_bounds(xs):
    exact = exact_sum(xs)
    abs_sum = sum(abs(Fraction(x)) for x in xs)
    u = Fraction(1, 2 ** 53)
    # Neumaier: |err| <= u|s| + O(n u^2) sum|x|
    err = abs(Fraction(S.sum_neumaier(xs)) - exact)
    assert err <= u * abs(exact) + 2 * (len(xs) + 1) * u * u * abs_sum
    err = abs(Fraction(S.sum_naive(xs)) - exact)
    assert err <= (len(xs)) * u * abs_sum * (1 + Fraction(1, 10 ** 6))


@given(values)
def test_pairwise_matches_naive_for_short_inputs(xs):
    assert S.sum_pairwise(xs[:32]) == S.sum_naive(xs[:32])


@given(values, st.integers(min_value=1, max_value=8))
def test_pairwise_base_block_bound(xs, block):
    exact = exact_sum(xs)
    abs_sum = sum(abs(Fraction(x)) for x in xs)
    depth = math.ceil(math.log2(max(len(xs), 2))) + block
    err = abs(Fraction(S.sum_pairwise(xs, base_block=block)) - exact)
    assert err <= depth * Fraction(1, 2 ** 53) * abs_sum * (1 + Fraction(1, 10 ** 6))


@given(values)
def test_sorted_is_permutation_invariant(xs):
    assert S.sum_sorted(xs) == S.sum_sorted(list(reversed(xs)))


def test_float32_hardware_path_matches_emulation():
    rng = np.random.default_rng(3)
    xs = rng.random(5000).astype(np.float32)
    as_list = [float(x) for x in xs]
    for method in S.METHODS:
        f = S.summation_function(method)
        assert f(xs) == f(as_list, fmt=BINARY32), method


def test_binary16_saturates_at_2048():
    assert S.sum_naive([1.0] * 5000, fmt=BINARY16) == 2048.0
    assert S.sum_kahan([1.0] * 5000, fmt=BINARY16) == 5000.0
    assert S.sum_mixed([1.0] * 5000) == 5000.0


def test_sum_mixed_validates_inputs():
    with pytest.raises(UsageError):
        S.sum_mixed([0.1])


def test_toy_decimal_format():
    fmt = parse_format("toy:10,3")
    xs = [Fraction("1.23")] * 100
    assert S.sum_naive(xs, fmt=fmt) == Fraction("117")  # past 100 each step adds 1, not 1.23
    assert S.sum_kahan(xs, fmt=fmt) == Fraction("123")


def test_predicted_error_model():
    eps = 2.0 ** -24
    assert S.predicted_relative_error(10 ** 6, eps, "naive") > \
        S.predicted_relative_error(10 ** 6, eps, "pairwise") > \
        S.predicted_relative_error(10 ** 6, eps, "neumaier")
    with pytest.raises(UsageError):
        S.predicted_relative_error(10, eps, "nope")


def test_leibniz_partial_sum_geometric():
    total, tail = S.leibniz_partial_sum(lambda k: (-0.5) ** k, 60)
    exact = sum(Fraction(-1, 2) ** k for k in range(61))
    assert abs(Fraction(total) - exact) <= Fraction(math.ulp(float(exact)))
    assert tail == 0.5 ** 61
    limit = Fraction(2, 3)
    assert abs(Fraction(total) - limit) <= Fraction(tail) + Fraction(math.ulp(total))


def test_compare_sums_report():
    xs = np.random.default_rng(0).random(1000).astype(np.float32)
    reports = S.compare_sums(xs)
    assert [r.method for r in reports] == list(S.METHODS)
    for r in reports:
        assert r.relative_error == relative_error(r.result, r.exact)
    assert min(reports, key=lambda r: r.error_ulps).method in ("pairwise", "kahan", "neumaier")


def test_binary64_default_context():
    assert S.sum_naive([0.1, 0.2]) == 0.1 + 0.2
    assert S.sum_naive([0.1, 0.2], fmt=BINARY64) == 0.30000000000000004
