"""Outward-rounded interval arithmetic on binary64 endpoints.

Each endpoint is computed with round-to-nearest.  An error-free residual
tells on which side of the exact value the rounded one fell; the endpoint is
pushed one lattice step outward only when it fell on the wrong side (one
step always covers the at most half-ulp error).  Exact operations therefore
stay exact and inexact ones give one-ulp enclosures.  No hardware
rounding-mode switching is involved.

Passing ``exact_aware=False`` gives the blind alternative that widens every
endpoint unconditionally; it exists to show how quickly that inflates.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from fractions import Fraction

from .eft import PRODUCT_UNDERFLOW_GUARD, fma, two_prod, two_sum
from .errors import DomainError, UsageError, ZeroDivisorError
from .formats import BINARY64, TOWARD_NEGATIVE, TOWARD_POSITIVE, arithmetic, round_rational
from .oracle import parse_decimal

_INF = math.inf
_UP = arithmetic(BINARY64, TOWARD_POSITIVE)


@dataclass(frozen=True)
class Interval:
    """The closed set ``[lo, hi]``; endpoints may be infinite, never nan."""

    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if lo != lo or hi != hi:
            raise UsageError("interval endpoints cannot be nan")
        if lo > hi:
            raise UsageError(f"empty interval [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @classmethod
    def point(cls, x: float) -> Interval:
        return cls(x, x)

    @classmethod
    def from_decimal(cls, text: str) -> Interval:
        """Tightest interval containing the exact value of a decimal literal."""
        q = parse_decimal(text)
        lo = float(round_rational(q, BINARY64, TOWARD_NEGATIVE)[0])
        hi = float(round_rational(q, BINARY64, TOWARD_POSITIVE)[0])
        return cls(lo, hi)

    @classmethod
    def whole(cls) -> Interval:
        return cls(-_INF, _INF)

    def __str__(self) -> str:
        from .oracle import shortest_roundtrip_decimal as short
        return f"[{short(self.lo)}, {short(self.hi)}] (width {short(iv_width(self))})"

    def __contains__(self, q) -> bool:
        return iv_contains(self, q)


# An endpoint candidate is (value, side): side is the sign of exact - value,
# or None when unknown.

_UNKNOWN = None


def _sign(r: float) -> int:
    return (r > 0) - (r < 0)


def _down(value: float, side: int | None) -> float:
    if side in (0, 1) or value == -_INF:
        return value
    return math.nextafter(value, -_INF)


def _up(value: float, side: int | None) -> float:
    if side in (0, -1) or value == _INF:
        return value
    return math.nextafter(value, _INF)


def _sum_exact(x: float, y: float, aware: bool) -> tuple[float, int | None]:
    s = x + y
    if not aware:
        return s, _UNKNOWN
    if math.isinf(s):
        return s, 0 if (math.isinf(x) or math.isinf(y)) else _UNKNOWN
    return s, _sign(two_sum(x, y).lo)


def _whole_line(reason: str) -> Interval:
    warnings.warn(f"interval result is the whole line: {reason}", RuntimeWarning, stacklevel=3)
    return Interval.whole()


def iv_add(a: Interval, b: Interval, *, exact_aware: bool = True) -> Interval:
    lo, lo_side = _sum_exact(a.lo, b.lo, exact_aware)
    hi, hi_side = _sum_exact(a.hi, b.hi, exact_aware)
    if lo != lo or hi != hi:
        return _whole_line("inf - inf")
    return Interval(_down(lo, lo_side), _up(hi, hi_side))


def iv_neg(a: Interval) -> Interval:
    return Interval(-a.hi, -a.lo)


def iv_sub(a: Interval, b: Interval, *, exact_aware: bool = True) -> Interval:
    return iv_add(a, iv_neg(b), exact_aware=exact_aware)


def _product(x: float, y: float, aware: bool) -> tuple[float, int | None]:
    if x == 0 or y == 0:
        return 0.0, 0  # 0 * inf is 0 for interval endpoints
    p = x * y
    if math.isinf(x) or math.isinf(y):
        return p, 0
    if not aware or math.isinf(p):
        return p, _UNKNOWN
    dw = two_prod(x, y)
    return p, _sign(dw.lo) if dw.exact else _UNKNOWN


def iv_mul(a: Interval, b: Interval, *, exact_aware: bool = True) -> Interval:
    """Hull of the four endpoint products, each rounded outward."""
    products = [_product(x, y, exact_aware) for x in (a.lo, a.hi) for y in (b.lo, b.hi)]
    lo = min(_down(p, side) for p, side in products)
    hi = max(_up(p, side) for p, side in products)
    return Interval(lo, hi)


def _quotients(x: float, y: float, aware: bool) -> list[tuple[float, int | None]]:
    """Candidate endpoint values of ``x / y`` with their sides."""
    if math.isinf(x) or math.isinf(y):
        sign = math.copysign(1.0, x) * math.copysign(1.0, y)
        if math.isinf(x) and math.isinf(y):
            # the limit can be anything of that sign
            return [(0.0, 0), (sign * _INF, 0)]
        return [(x / y if math.isinf(x) else 0.0, 0)]
    q = x / y
    if not aware:
        return [(q, _UNKNOWN)]
    if x == 0:
        return [(q, 0)]
    if math.isinf(q) or abs(q) < PRODUCT_UNDERFLOW_GUARD:
        return [(q, _UNKNOWN)]
    # x - q*y has the sign of (x/y - q) * sign(y)
    return [(q, _sign(-fma(q, y, -x)) * (1 if y > 0 else -1))]


def iv_div(a: Interval, b: Interval, *, exact_aware: bool = True,
           allow_whole_line: bool = False) -> Interval:
    """Outward-rounded quotient; a divisor containing 0 is an error unless opted in."""
    if b.lo <= 0 <= b.hi:
        if allow_whole_line:
            return Interval.whole()
        raise ZeroDivisorError(f"divisor {b} contains zero")
    quotients = [c for x in (a.lo, a.hi) for y in (b.lo, b.hi)
                 for c in _quotients(x, y, exact_aware)]
    lo = min(_down(q, side) for q, side in quotients)
    hi = max(_up(q, side) for q, side in quotients)
    return Interval(lo, hi)


def _root(x: float, aware: bool) -> tuple[float, int | None]:
    r = math.sqrt(x)
    if not aware:
        return r, _UNKNOWN
    if x == 0 or math.isinf(x):
        return r, 0
    if x < 2.0 ** -900:
        return r, _UNKNOWN
    return r, _sign(-fma(r, r, -x))


def iv_sqrt(a: Interval, *, exact_aware: bool = True) -> Interval:
    if a.lo < 0:
        raise DomainError(f"square root of {a}, which reaches below zero")
    lo, lo_side = _root(a.lo, exact_aware)
    hi, hi_side = _root(a.hi, exact_aware)
    return Interval(max(0.0, _down(lo, lo_side)), _up(hi, hi_side))


def iv_width(a: Interval) -> float:
    """``hi - lo`` rounded toward +inf."""
    return _UP.sub(a.hi, a.lo)


def iv_midpoint(a: Interval) -> float:
    if math.isinf(a.lo) and math.isinf(a.hi):
        return 0.0
    if math.isinf(a.lo) or math.isinf(a.hi):
        return a.lo if math.isinf(a.lo) else a.hi
    return a.lo / 2 + a.hi / 2


def iv_contains(a: Interval, q) -> bool:
    """Exact membership test of a rational (or float) in ``a``."""
    q = Fraction(q)
    above_lo = a.lo == -_INF or Fraction(a.lo) <= q
    below_hi = a.hi == _INF or q <= Fraction(a.hi)
    return above_lo and below_hi


def iv_subset(a: Interval, b: Interval) -> bool:
    return b.lo <= a.lo and a.hi <= b.hi


@dataclass(frozen=True)
class DemonDemo:
    """Width histories of ``x <- x*c + d``.

    ``widths``: exactness-aware run with the given (inexact) constants.
    ``exact_aware`` / ``exact_inflated``: ``x <- x*1`` from ``[1, 1]``, exact
    at every step, with and without exactness awareness.
    """

    widths: tuple[float, ...]
    exact_aware: tuple[float, ...]
    exact_inflated: tuple[float, ...]


def iv_demon_demo(iterations: int, c: str = "1", d: str = "0.1",
                  start: str = "1") -> DemonDemo:
    """Show interval widths growing step after step, and blind inflation growing faster."""
    if iterations < 1:
        raise UsageError("iterations must be >= 1")
    cc, dd = Interval.from_decimal(c), Interval.from_decimal(d)
    x = Interval.from_decimal(start)
    widths = []
    for _ in range(iterations):
        x = iv_add(iv_mul(x, cc), dd)
        widths.append(iv_width(x))
    one = Interval.point(1.0)
    aware = inflated = one
    aware_widths, inflated_widths = [], []
    for _ in range(iterations):
        aware = iv_mul(aware, one)
        inflated = iv_mul(inflated, one, exact_aware=False)
        aware_widths.append(iv_width(aware))
        inflated_widths.append(iv_width(inflated))
    return DemonDemo(tuple(widths), tuple(aware_widths), tuple(inflated_widths))


__all__ = [
    "DemonDemo", "Interval", "iv_add", "iv_contains", "iv_demon_demo", "iv_div",
    "iv_midpoint", "iv_mul", "iv_neg", "iv_sqrt", "iv_sub", "iv_subset", "iv_width",
]
