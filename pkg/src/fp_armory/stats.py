"""Variance estimators and mergeable streaming accumulators."""

from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass

from .errors import UsageError
from .formats import Arithmetic, FormatSpec, arithmetic

Fmt = FormatSpec | str | Arithmetic | None


@dataclass(frozen=True)
class OnlineStats:
    """Count, running mean and sum of squared deviations ``m2`` (never negative)."""

    n: int = 0
    mean: float = 0.0
    m2: float = 0.0


def welford_update(acc: OnlineStats, x, fmt: Fmt = None) -> OnlineStats:
    """One step of Welford's recurrence, each operation rounded in ``fmt``."""
    A = arithmetic(fmt)
    n = acc.n + 1
    delta = A.sub(x, acc.mean)
    mean = A.add(acc.mean, A.div(delta, n))
    # delta and (x - mean) agree in sign in exact arithmetic; rounding of a
    # value that is not in the format can flip the second, hence the clamp.
    m2 = A.add(acc.m2, A.mul(delta, A.sub(x, mean)))
    return OnlineStats(n, mean, m2 if m2 > 0 else 0.0)


def welford(xs: Iterable, fmt: Fmt = None) -> OnlineStats:
    A = arithmetic(fmt)
    acc = OnlineStats()
    for x in xs:
        acc = welford_update(acc, x, A)
    return acc


def welford_merge(a: OnlineStats, b: OnlineStats, fmt: Fmt = None) -> OnlineStats:
    """Combine two accumulators with the pooled mean / pooled ``m2`` identity."""
    if a.n == 0:
        return b
    if b.n == 0:
        return a
    A = arithmetic(fmt)
    n = a.n + b.n
    delta = A.sub(b.mean, a.mean)
    mean = A.add(a.mean, A.mul(delta, A.div(b.n, n)))
    cross = A.mul(A.mul(delta, delta), A.div(a.n * b.n, n))
    m2 = A.add(A.add(a.m2, b.m2), cross)
    return OnlineStats(n, mean, max(m2, 0.0))


def _divisor(n: int, population: bool) -> int:
    if n < 2:
        raise UsageError(f"variance needs at least 2 values, got {n}")
    return n if population else n - 1


def variance_sample(acc: OnlineStats, fmt: Fmt = None, population: bool = False):
    """``m2 / (n - 1)`` (or ``m2 / n`` with ``population``)."""
    return arithmetic(fmt).div(acc.m2, _divisor(acc.n, population))


def variance_naive(xs, fmt: Fmt = None, population: bool = False):
    """``(sum x^2 - (sum x)^2 / N) / (N - 1)``, all in ``fmt``.  Can go negative."""
    A = arithmetic(fmt)
    xs = list(xs)
    n = len(xs)
    divisor = _divisor(n, population)
    s1 = s2 = 0.0
    for x in xs:
        s1 = A.add(s1, x)
        s2 = A.add(s2, A.mul(x, x))
    return A.div(A.sub(s2, A.div(A.mul(s1, s1), n)), divisor)


def _neumaier(A: Arithmetic, values) -> object:
    s = c = 0.0
    for x in values:
        t = A.add(s, x)
        if abs(s) >= abs(x):
            c = A.add(c, A.add(A.sub(s, t), x))
        else:
            c = A.add(c, A.add(A.sub(x, t), s))
        s = t
    return A.add(s, c)


def variance_two_pass(xs, fmt: Fmt = None, population: bool = False):
    """Mean first, then compensated sums of the deviations.

    The second pass also sums the deviations themselves and subtracts
    ``(sum d)^2 / N``, which removes the error left in the rounded mean.
    The result is clamped at zero.
    """
    A = arithmetic(fmt)
    xs = list(xs)
    n = len(xs)
    divisor = _divisor(n, population)
    mean = A.div(_neumaier(A, xs), n)
    deviations = [A.sub(x, mean) for x in xs]
    squares = _neumaier(A, (A.mul(d, d) for d in deviations))
    drift = _neumaier(A, deviations)
    result = A.div(A.sub(squares, A.div(A.mul(drift, drift), n)), divisor)
    return result if result > 0 else 0.0


@dataclass(frozen=True)
class OnlineCovariance:
    """Welford-style accumulator for the co-moment of paired samples."""

    n: int = 0
    mean_x: float = 0.0
    mean_y: float = 0.0
    c: float = 0.0


def covariance_update(acc: OnlineCovariance, x, y, fmt: Fmt = None) -> OnlineCovariance:
    A = arithmetic(fmt)
    n = acc.n + 1
    dx = A.sub(x, acc.mean_x)
    mean_x = A.add(acc.mean_x, A.div(dx, n))
    mean_y = A.add(acc.mean_y, A.div(A.sub(y, acc.mean_y), n))
    c = A.add(acc.c, A.mul(dx, A.sub(y, mean_y)))
    return OnlineCovariance(n, mean_x, mean_y, c)


def covariance_merge(a: OnlineCovariance, b: OnlineCovariance,
                     fmt: Fmt = None) -> OnlineCovariance:
    if a.n == 0:
        return b
    if b.n == 0:
        return a
    A = arithmetic(fmt)
    n = a.n + b.n
    dx = A.sub(b.mean_x, a.mean_x)
    dy = A.sub(b.mean_y, a.mean_y)
    weight = A.div(b.n, n)
    mean_x = A.add(a.mean_x, A.mul(dx, weight))
    mean_y = A.add(a.mean_y, A.mul(dy, weight))
    c = A.add(A.add(a.c, b.c), A.mul(A.mul(dx, dy), A.div(a.n * b.n, n)))
    return OnlineCovariance(n, mean_x, mean_y, c)


def covariance_sample(acc: OnlineCovariance, fmt: Fmt = None, population: bool = False):
    return arithmetic(fmt).div(acc.c, _divisor(acc.n, population))


__all__ = [
    "OnlineCovariance", "OnlineStats", "covariance_merge", "covariance_sample",
    "covariance_update", "variance_naive", "variance_sample", "variance_two_pass",
    "welford", "welford_merge", "welford_update",
]
