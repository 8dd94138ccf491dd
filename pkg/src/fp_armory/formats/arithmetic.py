"""Arithmetic contexts: one object per (format, rounding mode) pair.

Every algorithm in the package is written against this small interface so
that the same code runs in native binary64, in an emulated binary format
(binary16, binary32, custom binary toys) or in a decimal toy format.

Operands enter each operation exactly and the result is rounded once into
the context's format.  Values are native floats for binary formats that
embed in binary64 and :class:`fractions.Fraction` for everything else
(``inf``/``nan`` stay floats).
"""

from __future__ import annotations

import math
import operator
from fractions import Fraction
from functools import lru_cache

from ..eft import fma as _fma
from ..errors import UsageError
from .native import embeds_in_binary64, round_float
from .spec import BINARY64, NEAREST_EVEN, FormatSpec, RoundingMode, as_format
from .toyfloat import ToyFloat, round_rational, round_sqrt

# Below this magnitude the fma residual may itself underflow.
_RESIDUAL_GUARD = 2.0 ** -900


def ieee_div(a: float, b: float) -> float:
    """``a / b`` with IEEE results for a zero divisor instead of an exception."""
    try:
        return a / b
    except ZeroDivisionError:
        if a != a or a == 0:
            return math.nan
        negative = (math.copysign(1.0, a) < 0) != (math.copysign(1.0, b) < 0)
        return -math.inf if negative else math.inf


def ieee_sqrt(a: float) -> float:
    if a < 0:
        return math.nan
    return math.sqrt(a)


def _toy_to_value(x: ToyFloat, as_fraction: bool):
    if x.is_nan:
        return math.nan
    if x.is_infinite:
        return -math.inf if x.negative else math.inf
    if x.is_zero:
        return (Fraction(0) if as_fraction
                else (-0.0 if x.negative else 0.0))
    return x.value if as_fraction else float(x.value)


class Arithmetic:
    """Base class; subclasses provide ``add``, ``sub``, ``mul``, ``div``, ``sqrt``."""

    fmt: FormatSpec
    mode: RoundingMode

    def coerce(self, x):
        """Round an input (float, int, Fraction or decimal string) into the format."""
        raise NotImplementedError

    def fma(self, a, b, c):
        """``a*b + c`` with a single rounding."""
        values = (a, b, c)
        if not all(_finite(v) for v in values):
            return self.add(float(a) * float(b), float(c))
        exact = Fraction(a) * Fraction(b) + Fraction(c)
        return self._round(exact)

    def _round(self, q: Fraction):
        raise NotImplementedError

    def neg(self, a):
        return -a

    def call(self, func, x):
        """Apply a binary64 library function, then round once into the format."""
        value = func(float(x))
        return self._round(Fraction(value)) if math.isfinite(value) else value

    def fold_add(self, values, start=0.0):
        """Left-to-right sum with one rounding per step."""
        add = self.add
        acc = start
        for x in values:
            acc = add(acc, x)
        return acc

    def to_fraction(self, a) -> Fraction:
        if not _finite(a):
            raise UsageError(f"{a} has no rational value")
        return Fraction(a)

    def to_float(self, a) -> float:
        return float(a)

    @property
    def epsilon(self) -> Fraction:
        return self.fmt.epsilon

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.fmt}, {self.mode.value})"


def _finite(v) -> bool:
    return isinstance(v, (Fraction, int)) or math.isfinite(v)


class Binary64Arithmetic(Arithmetic):
    """Native hardware binary64, round to nearest even."""

    def __init__(self):
        self.fmt = BINARY64
        self.mode = NEAREST_EVEN
        self.add = operator.add
        self.sub = operator.sub
        self.mul = operator.mul
        self.div = ieee_div
        self.sqrt = ieee_sqrt
        self.fma = _fma

    def coerce(self, x):
        if isinstance(x, str):
            from ..oracle import parse_decimal
            return float(parse_decimal(x))
        return float(x)

    def _round(self, q: Fraction):
        return float(q)


class EmulatedBinaryArithmetic(Arithmetic):
    """A binary format nested in binary64, any rounding mode.

    The binary64 result and the sign of its error-free residual determine the
    single correct rounding into the target format.
    """

    def __init__(self, fmt: FormatSpec, mode: RoundingMode = NEAREST_EVEN):
        if not embeds_in_binary64(fmt):
            raise UsageError(f"{fmt} does not embed in binary64")
        self.fmt = fmt
        self.mode = mode

    def coerce(self, x):
        if isinstance(x, str):
            from ..oracle import parse_decimal
            x = parse_decimal(x)
        if isinstance(x, (Fraction, int)) and not isinstance(x, bool):
            return self._round(Fraction(x))
        return round_float(float(x), self.fmt, NEAREST_EVEN)

    def _round(self, q: Fraction):
        return _toy_to_value(round_rational(q, self.fmt, self.mode)[0], False)

    def _finish(self, r: float, sticky: float, a: float, b: float, op) -> float:
        if math.isinf(r) and math.isfinite(a) and math.isfinite(b):
            return self._round(op(Fraction(a), Fraction(b)))
        return round_float(r, self.fmt, self.mode, sticky)

    def add(self, a: float, b: float) -> float:
        s = a + b
        bb = s - a
        return self._finish(s, (a - (s - bb)) + (b - bb), a, b, operator.add)

    def sub(self, a: float, b: float) -> float:
        return self.add(a, -b)

    def fold_add(self, values, start=0.0):
        # Inlined two_sum plus a small memo: long runs such as a saturated
        # accumulator repeat the same (acc, x) pair many times.
        fmt, mode = self.fmt, self.mode
        memo: dict[tuple[float, float], float] = {}
        acc = start
        for x in values:
            key = (acc, x)
            hit = memo.get(key)
            if hit is not None:
                acc = hit
                continue
            s = acc + x
            if s - s != 0:
                r = self.add(acc, x)
            else:
                bb = s - acc
                r = round_float(s, fmt, mode, (acc - (s - bb)) + (x - bb))
            if acc != 0 and x != 0:  # signed zeros compare equal as keys
                if len(memo) > 65536:
                    memo.clear()
                memo[key] = r
            acc = r
        return acc

    def mul(self, a: float, b: float) -> float:
        p = a * b
        if (p == 0 or abs(p) < _RESIDUAL_GUARD) and a != 0 and b != 0 \
                and math.isfinite(a) and math.isfinite(b):
            return self._round(Fraction(a) * Fraction(b))
        if p != p or math.isinf(p):
            return self._finish(p, 0.0, a, b, operator.mul)
        return round_float(p, self.fmt, self.mode, _fma(a, b, -p))

    def div(self, a: float, b: float) -> float:
        if b == 0 or not (math.isfinite(a) and math.isfinite(b)):
            return round_float(ieee_div(a, b), self.fmt, self.mode)
        if a == 0:
            return ieee_div(a, b)
        q = a / b
        if abs(q) < _RESIDUAL_GUARD or abs(a) < _RESIDUAL_GUARD or math.isinf(q):
            return self._round(Fraction(a) / Fraction(b))
        r = _fma(-q, b, a)
        return round_float(q, self.fmt, self.mode, -r if b < 0 else r)

    def sqrt(self, a: float) -> float:
        if a < 0:
            return math.nan
        if a == 0 or not math.isfinite(a):
            return math.sqrt(a) if a == a else a
        if a < _RESIDUAL_GUARD:
            return _toy_to_value(round_sqrt(Fraction(a), self.fmt, self.mode)[0], False)
        r = math.sqrt(a)
        return round_float(r, self.fmt, self.mode, _fma(-r, r, a))

    def fma(self, a, b, c):
        if self.fmt == BINARY64 and self.mode is NEAREST_EVEN:
            return _fma(a, b, c)
        return super().fma(a, b, c)


class RationalArithmetic(Arithmetic):
    """Any format, values held as exact Fractions between operations.

    Signed zeros collapse to ``Fraction(0)``; infinities and nan are floats.
    """

    def __init__(self, fmt: FormatSpec, mode: RoundingMode = NEAREST_EVEN):
        self.fmt = fmt
        self.mode = mode

    def coerce(self, x):
        if isinstance(x, str):
            from ..oracle import parse_decimal
            x = parse_decimal(x)
        if isinstance(x, float) and not math.isfinite(x):
            return x
        return _toy_to_value(round_rational(Fraction(x), self.fmt, NEAREST_EVEN)[0], True)

    def _round(self, q: Fraction):
        return _toy_to_value(round_rational(q, self.fmt, self.mode)[0], True)

    def _special(self, a, b, op):
        return op(float(a), float(b))

    def add(self, a, b):
        if not (_finite(a) and _finite(b)):
            return self._special(a, b, operator.add)
        return self._round(Fraction(a) + Fraction(b))

    def sub(self, a, b):
        if not (_finite(a) and _finite(b)):
            return self._special(a, b, operator.sub)
        return self._round(Fraction(a) - Fraction(b))

    def mul(self, a, b):
        if not (_finite(a) and _finite(b)):
            return self._special(a, b, operator.mul)
        return self._round(Fraction(a) * Fraction(b))

    def div(self, a, b):
        if not (_finite(a) and _finite(b)) or b == 0:
            return self._special(a, b, ieee_div)
        return self._round(Fraction(a) / Fraction(b))

    def sqrt(self, a):
        if not _finite(a):
            return math.nan if a != a or a < 0 else a
        if a < 0:
            return math.nan
        return _toy_to_value(round_sqrt(Fraction(a), self.fmt, self.mode)[0], True)


class CountingArithmetic(Arithmetic):
    """Wraps another context and counts the operations it performs."""

    def __init__(self, inner: Arithmetic):
        self.inner = inner
        self.fmt = inner.fmt
        self.mode = inner.mode
        self.counts = {"add": 0, "sub": 0, "mul": 0, "div": 0, "sqrt": 0, "fma": 0}

    def coerce(self, x):
        return self.inner.coerce(x)

    def _count(self, name):
        self.counts[name] += 1
        return getattr(self.inner, name)

    def add(self, a, b):
        return self._count("add")(a, b)

    def sub(self, a, b):
        return self._count("sub")(a, b)

    def mul(self, a, b):
        return self._count("mul")(a, b)

    def div(self, a, b):
        return self._count("div")(a, b)

    def sqrt(self, a):
        return self._count("sqrt")(a)

    def fma(self, a, b, c):
        return self._count("fma")(a, b, c)


_NATIVE = Binary64Arithmetic()


@lru_cache(maxsize=None)
def _build(fmt: FormatSpec, mode: RoundingMode) -> Arithmetic:
    if fmt == BINARY64 and mode is NEAREST_EVEN:
        return _NATIVE
    if embeds_in_binary64(fmt):
        return EmulatedBinaryArithmetic(fmt, mode)
    return RationalArithmetic(fmt, mode)


def arithmetic(fmt: FormatSpec | str | Arithmetic | None = None,
               mode: RoundingMode = NEAREST_EVEN) -> Arithmetic:
    """The arithmetic context for ``fmt`` (default binary64) and ``mode``."""
    if isinstance(fmt, Arithmetic):
        return fmt
    return _build(as_format(fmt), mode)
