"""Fast rounding of binary64 values into binary formats nested inside binary64.

``round_float(x, fmt, mode, sticky)`` rounds the exact value ``x + d`` where
``d`` is an infinitesimal with the sign of ``sticky``.  Paired with an
error-free transformation (``sticky`` = the residual) this yields a single
correct rounding of the exact sum, product, quotient or root, with no
double-rounding hazard.  Results are identical to :func:`round_rational`
(property-tested).
"""

from __future__ import annotations

import math

from .spec import (
    AWAY_FROM_ZERO,
    FARTHEST_FROM_EXACT,
    NEAREST_EVEN,
    TOWARD_NEGATIVE,
    TOWARD_POSITIVE,
    FormatSpec,
    RoundingMode,
)
from .toyfloat import _round_up

_frexp = math.frexp
_ldexp = math.ldexp
_floor = math.floor


def embeds_in_binary64(fmt: FormatSpec) -> bool:
    """True if every value and midpoint of ``fmt`` is a binary64 number."""
    return (fmt.radix == 2 and fmt.subnormals and fmt.precision <= 53
            and fmt.e_max <= 1023 and fmt.e_min - fmt.precision + 1 >= -1074)


class _Limits:
    __slots__ = ("precision", "e_min", "e_max", "max_finite", "min_positive", "leading")

    def __init__(self, fmt: FormatSpec):
        self.precision = fmt.precision
        self.e_min = fmt.e_min
        self.e_max = fmt.e_max
        self.max_finite = float(fmt.max_finite)
        self.min_positive = float(fmt.min_positive)
        self.leading = float(2 ** (fmt.precision - 1))


_LIMITS: dict[FormatSpec, _Limits] = {}


def _limits(fmt: FormatSpec) -> _Limits:
    lim = _LIMITS.get(fmt)
    if lim is None:
        if not embeds_in_binary64(fmt):
            raise ValueError(f"{fmt} does not embed in binary64")
        lim = _LIMITS[fmt] = _Limits(fmt)
    return lim


def round_float(x: float, fmt: FormatSpec, mode: RoundingMode = NEAREST_EVEN,
                sticky: float = 0.0) -> float:
    """Round ``x`` (nudged infinitesimally toward the sign of ``sticky``) into ``fmt``."""
    if x != x or x in (math.inf, -math.inf):
        return x
    lim = _limits(fmt)
    if x == 0:
        if sticky == 0 or sticky != sticky:
            return x
        negative = sticky < 0
        if _round_up(mode, negative, -1, False):
            return -lim.min_positive if negative else lim.min_positive
        return -0.0 if negative else 0.0
    negative = x < 0
    ax = -x if negative else x
    stick = (sticky > 0) - (sticky < 0)
    if negative:
        stick = -stick
    _, e = _frexp(ax)
    top = e - 1
    if top > lim.e_max:
        return _overflow(lim, negative, mode)
    normal = top > lim.e_min
    quantum = (top if normal else lim.e_min) - lim.precision + 1
    y = _ldexp(ax, -quantum)
    n = _floor(y)
    frac = y - n
    if frac == 0:
        if stick == 0:
            if ax > lim.max_finite:
                return _overflow(lim, negative, mode)
            return x
        if stick > 0:
            half = -1
        elif normal and n == lim.leading:
            # just below a power of two: the finer binade underneath applies
            quantum -= 1
            n = 2 * n - 1
            half = 1
        else:
            n -= 1
            half = 1
    else:
        half = (frac > 0.5) - (frac < 0.5)
        if half == 0:
            half = stick
    if _round_up(mode, negative, half, n % 2 == 1):
        n += 1
    r = _ldexp(n, quantum)
    if r > lim.max_finite:
        return _overflow(lim, negative, mode)
    return -r if negative else r


def _overflow(lim: _Limits, negative: bool, mode: RoundingMode) -> float:
    to_infinity = (mode in (NEAREST_EVEN, AWAY_FROM_ZERO, FARTHEST_FROM_EXACT)
                   or (mode is TOWARD_POSITIVE and not negative)
                   or (mode is TOWARD_NEGATIVE and negative))
    r = math.inf if to_infinity else lim.max_finite
    return -r if negative else r
