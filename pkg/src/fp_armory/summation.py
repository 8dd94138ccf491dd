"""Summation algorithms and their error models.

All functions take the data plus an optional working format (or an
:class:`~fp_armory.formats.Arithmetic` context).  Without one, float32 numpy
arrays are summed in binary32 and everything else in binary64.  Float32
arrays in binary32 round-to-nearest run on hardware; other formats go
through the software formats, one correct rounding per operation.
"""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import oracle
from .errors import UsageError
from .formats import (
    BINARY16,
    BINARY32,
    BINARY64,
    NEAREST_EVEN,
    Arithmetic,
    FormatSpec,
    arithmetic,
)

DEFAULT_BASE_BLOCK = 32
METHODS = ("naive", "sorted", "pairwise", "kahan", "neumaier")


def _prepare(xs, fmt) -> tuple[object, Arithmetic, bool]:
    """Return (data, context, hardware) where hardware means a float32 numpy path."""
    is_f32 = isinstance(xs, np.ndarray) and xs.dtype == np.float32
    if fmt is None:
        fmt = BINARY32 if is_f32 else BINARY64
    arith = arithmetic(fmt)
    hardware = is_f32 and arith.fmt == BINARY32 and arith.mode is NEAREST_EVEN
    if hardware:
        return xs, arith, True
    if isinstance(xs, np.ndarray):
        xs = xs.tolist()
    return list(xs), arith, False


def _f32_fold(xs: np.ndarray) -> np.float32:
    if len(xs) == 0:
        return np.float32(0.0)
    return np.add.accumulate(xs, dtype=np.float32)[-1]


def sum_naive(xs, fmt: FormatSpec | str | Arithmetic | None = None) -> float:
    """Left-to-right accumulation, rounding after every addition."""
    data, arith, hardware = _prepare(xs, fmt)
    if hardware:
        return float(_f32_fold(data))
    return arith.fold_add(data)


def sum_sorted(xs, fmt: FormatSpec | str | Arithmetic | None = None) -> float:
    """Naive accumulation after sorting by increasing magnitude.

    Only helps when the terms share a sign; with mixed signs the ordering
    gives no accuracy guarantee.
    """
    data, arith, hardware = _prepare(xs, fmt)
    if hardware:
        return float(_f32_fold(data[np.argsort(np.abs(data), kind="stable")]))
    return arith.fold_add(sorted(data, key=abs))


def sum_pairwise(xs, base_block: int = DEFAULT_BASE_BLOCK,
                 fmt: FormatSpec | str | Arithmetic | None = None) -> float:
    """Recursive halving; blocks of at most ``base_block`` terms are summed naively."""
    if base_block < 1:
        raise UsageError("base_block must be >= 1")
    data, arith, hardware = _prepare(xs, fmt)
    if hardware:
        return float(_pairwise_f32(data, base_block))
    if not data:
        return 0.0
    return _pairwise(data, 0, len(data), base_block, arith)


def _pairwise(data: list, lo: int, hi: int, block: int, arith: Arithmetic):
    if hi - lo <= block:
        return arith.fold_add(data[lo + 1:hi], data[lo])
    mid = (lo + hi) // 2
    return arith.add(_pairwise(data, lo, mid, block, arith),
                     _pairwise(data, mid, hi, block, arith))


def _pairwise_f32(data: np.ndarray, block: int) -> np.float32:
    n = len(data)
    if n <= block:
        return _f32_fold(data)
    mid = n // 2
    return _pairwise_f32(data[:mid], block) + _pairwise_f32(data[mid:], block)


def sum_kahan(xs, fmt: FormatSpec | str | Arithmetic | None = None) -> float:
    """Kahan's compensated summation."""
    data, arith, hardware = _prepare(xs, fmt)
    if hardware:
        s = c = np.float32(0.0)
        for x in data:
            y = x - c
            t = s + y
            c = (t - s) - y
            s = t
        return float(s)
    add, sub = arith.add, arith.sub
    s = c = 0.0
    for x in data:
        y = sub(x, c)
        t = add(s, y)
        c = sub(sub(t, s), y)
        s = t
    return s


def sum_neumaier(xs, fmt: FormatSpec | str | Arithmetic | None = None) -> float:
    """Neumaier's variant: branch on magnitudes, apply the correction once at the end."""
    data, arith, hardware = _prepare(xs, fmt)
    if hardware:
        s = c = np.float32(0.0)
        for x in data:
            t = s + x
            if abs(s) >= abs(x):
                c += (s - t) + x
            else:
                c += (x - t) + s
            s = t
        return float(s + c)
    add, sub = arith.add, arith.sub
    s = c = 0.0
    for x in data:
        t = add(s, x)
        if abs(s) >= abs(x):
            c = add(c, add(sub(s, t), x))
        else:
            c = add(c, add(sub(x, t), s))
        s = t
    return add(s, c)


def sum_mixed(xs) -> float:
    """Accumulate binary16 terms in a binary32 accumulator.

    Widening binary16 to binary32 is exact, so the only roundings are the
    binary32 additions.
    """
    halves = np.asarray(xs, dtype=np.float16)
    if not isinstance(xs, np.ndarray) or xs.dtype != np.float16:
        original = np.asarray(xs, dtype=np.float64)
        if not np.array_equal(halves.astype(np.float64), original, equal_nan=True):
            raise UsageError("sum_mixed needs values representable in binary16")
    return float(_f32_fold(halves.astype(np.float32)))


def predicted_relative_error(n: int, epsilon, method: str) -> float:
    """Order-of-magnitude error model (terms of comparable size, random-walk errors).

    ``naive``/``sorted``: eps*sqrt(n); ``pairwise``: eps*sqrt(log2 n);
    ``kahan``/``neumaier``: 2*eps.  These are guides, not bounds.
    """
    if n < 1:
        raise UsageError("n must be >= 1")
    eps = float(epsilon)
    if method in ("naive", "sorted"):
        return eps * math.sqrt(n)
    if method == "pairwise":
        return eps * math.sqrt(max(1.0, math.log2(n)))
    if method in ("kahan", "neumaier", "compensated"):
        return 2 * eps
    raise UsageError(f"unknown summation method {method!r}")


def leibniz_partial_sum(term: Callable[[int], float], n: int) -> tuple[float, float]:
    """Compensated sum of ``term(0) .. term(n)`` and the truncation bound ``|term(n+1)|``.

    For an alternating series with decreasing terms the neglected tail is
    bounded by its first term.  The caller vouches for that shape.
    """
    if n < 0:
        raise UsageError("n must be >= 0")
    return sum_neumaier(term(k) for k in range(n + 1)), abs(term(n + 1))


@dataclass(frozen=True)
class SumReport:
    method: str
    result: float
    exact: Fraction
    relative_error: Fraction | float
    error_ulps: Fraction | float


_FUNCTIONS = {
    "naive": sum_naive,
    "sorted": sum_sorted,
    "pairwise": sum_pairwise,
    "kahan": sum_kahan,
    "neumaier": sum_neumaier,
}


def summation_function(method: str) -> Callable:
    try:
        return _FUNCTIONS[method]
    except KeyError:
        raise UsageError(f"unknown summation method {method!r}") from None


def compare_sums(xs, fmt: FormatSpec | str | None = None,
                 methods: Sequence[str] = METHODS) -> list[SumReport]:
    """Run each method and measure it against the exact sum."""
    is_f32 = isinstance(xs, np.ndarray) and xs.dtype == np.float32
    target = arithmetic(fmt if fmt is not None else (BINARY32 if is_f32 else BINARY64)).fmt
    exact = oracle.exact_sum(xs)
    reports = []
    for method in methods:
        func = summation_function(method)
        result = func(xs, fmt=target)
        reports.append(SumReport(
            method, result, exact,
            oracle.relative_error(result, exact),
            oracle.error_ulps(result, exact, target) if exact != 0
            else (0 if result == 0 else math.inf),
        ))
    return reports


__all__ = [
    "DEFAULT_BASE_BLOCK", "METHODS", "SumReport", "compare_sums", "leibniz_partial_sum",
    "predicted_relative_error", "sum_kahan", "sum_mixed", "sum_naive", "sum_neumaier",
    "sum_pairwise", "sum_sorted", "summation_function", "BINARY16",
]
