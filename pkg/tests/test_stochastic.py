import math
import random
from concurrent.futures import ThreadPoolExecutor

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fp_armory import stable, stochastic as S, summation
from fp_armory.errors import UsageError
from fp_armory.formats import (
    BINARY32,
    FARTHEST_FROM_EXACT,
    NEAREST_EVEN,
    TOWARD_NEGATIVE,
    TOWARD_POSITIVE,
)


def rump(A):
    return stable.rump_expression(77617.0, 33096.0, A)


def test_exact_operations_never_perturbed():
    for seed in range(20):
        rng = random.Random(seed)
        assert S.perturbed_binop(2.0, 3.0, "*", rng=rng) == 6.0
        assert S.perturbed_binop(0.5, 0.25, "+", rng=rng) == 0.75


@given(st.floats(min_value=-1e10, max_value=1e10), st.floats(min_value=-1e10, max_value=1e10),
       st.integers(min_value=0, max_value=2 ** 32))
def test_random_rounding_brackets_the_exact_result(a, b, seed):
    got = S.perturbed_binop(a, b, "+", rng=random.Random(seed))
    down = S.perturbed_binop(a, b, "+", TOWARD_NEGATIVE)
    up = S.perturbed_binop(a, b, "+", TOWARD_POSITIVE)
    assert got in (down, up)
    assert down <= a + b <= up


def test_unknown_operator():
    with pytest.raises(UsageError):
        S.perturbed_binop(1.0, 2.0, "%")


def test_one_third_directed():
    down = S.perturbed_binop(1.0, 3.0, "/", TOWARD_NEGATIVE)
    nearest = S.perturbed_binop(1.0, 3.0, "/", NEAREST_EVEN)
    up = S.perturbed_binop(1.0, 3.0, "/", TOWARD_POSITIVE)
    assert down == nearest < up
    assert S.perturbed_binop(1.0, 3.0, "/", FARTHEST_FROM_EXACT) == up


def test_rump_has_no_significant_digits():
    report = S.run_stochastic(rump, n=32, seed=42)
    assert report.significant_digits <= 1
    assert report.flagged == 0


def test_exact_product_reaches_cap():
    report = S.run_stochastic(lambda A: A.mul(2.0, 3.0), n=8, seed=1)
    assert report.stddev == 0
    assert report.significant_digits == report.cap == pytest.approx(53 * math.log10(2))


def test_reproducible_and_order_independent():
    first = S.run_stochastic(rump, n=12, seed=7)
    again = S.run_stochastic(rump, n=12, seed=7)
    with ThreadPoolExecutor(4) as pool:
        threaded = S.run_stochastic(rump, n=12, seed=7, executor=pool)
    assert first == again == threaded
    assert S.run_stochastic(rump, n=12, seed=8).results != first.results


def test_sample_streams_independent_of_n():
    short = S.run_stochastic(rump, n=4, seed=3)
    long = S.run_stochastic(rump, n=8, seed=3)
    assert long.results[:4] == short.results


def test_compensated_sum_keeps_more_digits():
    data = [random.Random(0).random() for _ in range(2000)]
    naive = S.run_stochastic(lambda A: summation.sum_naive(data, A), n=8, seed=0)
    kahan = S.run_stochastic(lambda A: summation.sum_kahan(data, A), n=8, seed=0)
    assert kahan.significant_digits > naive.significant_digits + 1


def test_directed_spread_exceeds_result_on_rump():
    results = S.run_directed_suite(rump)
    assert set(results) == set(S.DIRECTED_MODES)
    assert S.directed_spread(results) > abs(results[NEAREST_EVEN])


def test_non_finite_samples_are_flagged():
    report = S.run_stochastic(lambda A: A.mul(3e38, 1e10), n=4, fmt=BINARY32)
    # rounding down saturates at the largest finite value instead
    assert 0 < report.flagged < 4
    report = S.run_stochastic(lambda A: A.add(math.inf, 1.0), n=4, fmt=BINARY32)
    assert report.flagged == 4 and math.isnan(report.mean) and report.significant_digits == 0


def test_argument_validation():
    with pytest.raises(UsageError):
        S.run_stochastic(rump, n=1)
    with pytest.raises(UsageError):
        S.run_stochastic(rump, seed=-1)


def test_instrumented_values():
    def f(A):
        x = S.instrument(A, 0.1)
        return ((x * 3 - 0.3) ** 2 + 1).sqrt() / 2

    report = S.run_stochastic(f, n=16, seed=0)
    assert report.mean == pytest.approx(0.5)
    x = S.instrument(S.policy_arithmetic(NEAREST_EVEN), 2.0)
    assert float(1 - x) == -1.0 and float(6 / x) == 3.0 and x > 1 and -x < 0


def test_significant_digits_formula():
    assert S.significant_digits(1.0, 1e-5, 15.9) == pytest.approx(5)
    assert S.significant_digits(1.0, 10.0, 15.9) == 0
    assert S.significant_digits(0.0, 1.0, 15.9) == 0
