from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fp_armory import stats
from fp_armory.errors import UsageError
from fp_armory.formats import BINARY32, arithmetic
from fp_armory.oracle import relative_error


def exact_variance(xs, population=False):
    q = [Fraction(x) for x in xs]
    mean = sum(q) / len(q)
    return sum((v - mean) ** 2 for v in q) / (len(q) - (0 if population else 1))


# squares of tiny values underflow, which no rounding-error bound covers
samples = st.lists(st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)
                   .filter(lambda v: v == 0 or abs(v) > 1e-100), min_size=2, max_size=40)


def test_small_example():
    xs = [2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0]
    acc = stats.welford(xs)
    assert acc.n == 8 and acc.mean == 5.0 and acc.m2 == 32.0
    assert stats.variance_sample(acc, population=True) == 4.0
    assert stats.variance_two_pass(xs) == pytest.approx(32 / 7)
    assert stats.variance_naive(xs) == pytest.approx(32 / 7)


def test_needs_two_values():
    with pytest.raises(UsageError):
        stats.variance_naive([1.0])
    with pytest.raises(UsageError):
        stats.variance_sample(stats.welford([1.0]))


def test_shifted_data_binary64():
    xs = [1e9 + k for k in (4, 7, 13, 16)]
    exact = exact_variance(xs)
    assert relative_error(stats.variance_two_pass(xs), exact) < 1e-12
    assert relative_error(stats.variance_sample(stats.welford(xs)), exact) < 1e-9
    assert relative_error(stats.variance_naive(xs), exact) > 1e-3


def test_binary32_shift_ten_thousand():
    A = arithmetic(BINARY32)
    xs = [1e4 + k for k in (1, 2, 3, 4)]
    exact = Fraction(5, 3)
    assert relative_error(stats.variance_two_pass(xs, A), exact) < 1e-6
    assert relative_error(stats.variance_sample(stats.welford(xs, A), A), exact) < 1e-3


@settings(max_examples=200)
@given(samples)
def test_variances_never_negative_robust(xs):
    assert stats.variance_two_pass(xs) >= 0
    assert stats.welford(xs).m2 >= 0


@settings(max_examples=200)
@given(samples)
def test_two_pass_accuracy(xs):
    exact = exact_variance(xs)
    got = stats.variance_two_pass(xs)
    if exact == 0:
        assert got == 0
    else:
        assert relative_error(got, exact) < 1e-10


@settings(max_examples=200)
@given(samples, st.integers(min_value=0, max_value=40))
def test_merge_matches_sequential(xs, cut):
    cut = min(cut, len(xs))
    merged = stats.welford_merge(stats.welford(xs[:cut]), stats.welford(xs[cut:]))
    whole = stats.welford(xs)
    assert merged.n == whole.n
    exact = exact_variance(xs)
    for acc in (merged, whole):
        got = stats.variance_sample(acc)
        assert abs(Fraction(got) - exact) <= max(exact, 1) * Fraction(1, 10 ** 9)


def test_merge_with_empty():
    acc = stats.welford([1.0, 2.0])
    assert stats.welford_merge(stats.OnlineStats(), acc) == acc
    assert stats.welford_merge(acc, stats.OnlineStats()) == acc


@given(st.lists(st.tuples(st.floats(min_value=-1e3, max_value=1e3),
                          st.floats(min_value=-1e3, max_value=1e3)), min_size=2, max_size=30),
       st.integers(min_value=0, max_value=30))
def test_covariance(pairs, cut):
    cut = min(cut, len(pairs))
    xs, ys = [p[0] for p in pairs], [p[1] for p in pairs]
    mx, my = sum(map(Fraction, xs)) / len(xs), sum(map(Fraction, ys)) / len(ys)
    exact = sum((Fraction(x) - mx) * (Fraction(y) - my) for x, y in pairs) / (len(pairs) - 1)

    def run(chunk):
        acc = stats.OnlineCovariance()
        for x, y in chunk:
            acc = stats.covariance_update(acc, x, y)
        return acc

    whole = run(pairs)
    merged = stats.covariance_merge(run(pairs[:cut]), run(pairs[cut:]))
    scale = max(1, sum(abs(Fraction(x)) for x in xs) * sum(abs(Fraction(y)) for y in ys))
    for acc in (whole, merged):
        assert abs(Fraction(stats.covariance_sample(acc)) - exact) <= scale * Fraction(1, 10 ** 12)


def test_covariance_of_self_is_variance():
    xs = [1.0, 3.0, 8.0, 9.5]
    acc = stats.OnlineCovariance()
    for x in xs:
        acc = stats.covariance_update(acc, x, x)
    assert stats.covariance_sample(acc) == pytest.approx(stats.variance_two_pass(xs))
