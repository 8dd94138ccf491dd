"""Error-free transformations over native binary64.

``two_sum`` and ``two_prod`` return ``DoubleWord(hi, lo)`` with
``hi = fl(a op b)`` and ``hi + lo == a op b`` exactly, as long as nothing
overflows and (for products) the residual does not fall below the subnormal
threshold.
"""

from __future__ import annotations

import ctypes
import ctypes.util
import math
from fractions import Fraction
from typing import NamedTuple

# Products whose magnitude is below this may lose bits of the residual.
PRODUCT_UNDERFLOW_GUARD = 2.0 ** (-1022 + 53)

_SPLITTER = 134217729.0  # 2**27 + 1


def _load_libm_fma():
    name = ctypes.util.find_library("m")
    if name is None:
        return None
    try:
        func = ctypes.CDLL(name).fma
    except (OSError, AttributeError):
        return None
    func.restype = ctypes.c_double
    func.argtypes = (ctypes.c_double, ctypes.c_double, ctypes.c_double)
    return func


def _fma_is_exact(func) -> bool:
    # (2**27+1)**2 = 2**54 + 2**28 + 1; a separately rounded product loses the 1.
    a = 2.0 ** 27 + 1.0
    try:
        return func(a, a, -(2.0 ** 54 + 2.0 ** 28)) == 1.0
    except Exception:
        return False


def _fma_exact_rational(a: float, b: float, c: float) -> float:
    if not (math.isfinite(a) and math.isfinite(b) and math.isfinite(c)):
        return a * b + c
    try:
        return float(Fraction(a) * Fraction(b) + Fraction(c))
    except OverflowError:
        return math.copysign(math.inf, a * b if a * b != 0 else c)


_libm_fma = _load_libm_fma()
HARDWARE_FMA = _libm_fma is not None and _fma_is_exact(_libm_fma)

#: Fused multiply-add with a single rounding.
fma = _libm_fma if HARDWARE_FMA else _fma_exact_rational


class DoubleWord(NamedTuple):
    """Unevaluated sum ``hi + lo``; ``exact`` is False when the guard bands were hit."""

    hi: float
    lo: float
    exact: bool = True

    def as_fraction(self) -> Fraction:
        return Fraction(self.hi) + Fraction(self.lo)


def two_sum(a: float, b: float) -> DoubleWord:
    """Knuth's branch-free six-operation sum."""
    s = a + b
    bb = s - a
    lo = (a - (s - bb)) + (b - bb)
    if math.isinf(s):
        return DoubleWord(s, math.nan, False)
    return DoubleWord(s, lo)


def fast_two_sum(a: float, b: float) -> DoubleWord:
    """Dekker's three-operation sum; requires ``|a| >= |b|``."""
    assert abs(a) >= abs(b) or math.isnan(a) or math.isnan(b), "fast_two_sum needs |a| >= |b|"
    s = a + b
    lo = b - (s - a)
    if math.isinf(s):
        return DoubleWord(s, math.nan, False)
    return DoubleWord(s, lo)


def split(a: float) -> tuple[float, float]:
    """Veltkamp splitting into two 26-bit halves."""
    c = _SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


def _two_prod_split(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def two_prod(a: float, b: float) -> DoubleWord:
    """Exact product ``a*b = hi + lo`` with ``lo = fma(a, b, -hi)``."""
    if HARDWARE_FMA:
        p = a * b
        lo = _libm_fma(a, b, -p)
    else:
        p, lo = _two_prod_split(a, b)
    if math.isinf(p):
        return DoubleWord(p, math.nan, False)
    exact = p == 0 or abs(p) >= PRODUCT_UNDERFLOW_GUARD
    if p == 0 and a != 0 and b != 0:
        exact = False
    return DoubleWord(p, lo, exact)
