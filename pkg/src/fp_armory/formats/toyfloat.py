"""Software floating-point values and correctly rounded operations on them.

Every rounding decision is taken from exact integer arithmetic: the exact
result is expressed as ``num / den`` and compared against the lattice of the
target format.  No guard/round/sticky bits are emulated.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from typing import NamedTuple

from ..errors import UsageError
from .spec import (
    AWAY_FROM_ZERO,
    FARTHEST_FROM_EXACT,
    NEAREST_EVEN,
    NO_FLAGS,
    TOWARD_NEGATIVE,
    TOWARD_POSITIVE,
    TOWARD_ZERO,
    ExceptionFlags,
    FormatSpec,
    RoundingMode,
)

_LOG10_2 = math.log10(2)


class Kind(enum.Enum):
    FINITE = "finite"
    ZERO = "zero"
    INFINITY = "infinity"
    NAN = "nan"


@dataclass(frozen=True)
class ToyFloat:
    """A datum of a :class:`FormatSpec`.

    For ``FINITE`` values the magnitude is
    ``significand * radix**(exponent - precision + 1)``; ``exponent`` is the
    exponent of the leading digit and equals ``e_min`` for subnormals.
    Equality (``==``) is structural, so ``-0`` and ``+0`` differ and a nan
    equals itself; numeric comparisons (``<``, ``<=``...) follow IEEE rules.
    """

    fmt: FormatSpec
    kind: Kind
    negative: bool = False
    significand: int = 0
    exponent: int = 0

    @classmethod
    def zero(cls, fmt: FormatSpec, negative: bool = False) -> ToyFloat:
        return cls(fmt, Kind.ZERO, negative, 0, fmt.e_min)

    @classmethod
    def infinity(cls, fmt: FormatSpec, negative: bool = False) -> ToyFloat:
        return cls(fmt, Kind.INFINITY, negative)

    @classmethod
    def nan(cls, fmt: FormatSpec) -> ToyFloat:
        return cls(fmt, Kind.NAN)

    @classmethod
    def max_finite(cls, fmt: FormatSpec, negative: bool = False) -> ToyFloat:
        return cls(fmt, Kind.FINITE, negative, fmt.max_significand, fmt.e_max)

    @classmethod
    def exact(cls, value, fmt: FormatSpec) -> ToyFloat:
        """The format member equal to ``value``; raises if it is not representable."""
        result, flags = round_rational(value, fmt)
        if flags.inexact or flags.overflow:
            raise UsageError(f"{value} is not representable in {fmt}")
        return result

    @classmethod
    def from_float(cls, x: float, fmt: FormatSpec,
                   mode: RoundingMode = NEAREST_EVEN) -> ToyFloat:
        if math.isnan(x):
            return cls.nan(fmt)
        if math.isinf(x):
            return cls.infinity(fmt, x < 0)
        if x == 0:
            return cls.zero(fmt, math.copysign(1.0, x) < 0)
        return round_rational(Fraction(x), fmt, mode)[0]

    @property
    def is_nan(self) -> bool:
        return self.kind is Kind.NAN

    @property
    def is_infinite(self) -> bool:
        return self.kind is Kind.INFINITY

    @property
    def is_zero(self) -> bool:
        return self.kind is Kind.ZERO

    @property
    def is_finite(self) -> bool:
        """True for finite values including zeros."""
        return self.kind in (Kind.FINITE, Kind.ZERO)

    @property
    def is_subnormal(self) -> bool:
        return (self.kind is Kind.FINITE
                and self.significand < self.fmt.radix ** (self.fmt.precision - 1))

    @property
    def quantum_exponent(self) -> int:
        return self.exponent - self.fmt.precision + 1

    @property
    def value(self) -> Fraction:
        """Exact rational value; only defined for finite values."""
        if self.kind is Kind.ZERO:
            return Fraction(0)
        if self.kind is not Kind.FINITE:
            raise UsageError(f"{self.kind.value} has no rational value")
        magnitude = self.significand * _scale(self.fmt.radix, self.quantum_exponent)
        return -magnitude if self.negative else magnitude

    def __neg__(self) -> ToyFloat:
        if self.is_nan:
            return self
        return ToyFloat(self.fmt, self.kind, not self.negative, self.significand, self.exponent)

    def __abs__(self) -> ToyFloat:
        return -self if self.negative and not self.is_nan else self

    def __float__(self) -> float:
        if self.kind is Kind.NAN:
            return math.nan
        if self.kind is Kind.INFINITY:
            return -math.inf if self.negative else math.inf
        if self.kind is Kind.ZERO:
            return -0.0 if self.negative else 0.0
        return float(self.value)

    def __str__(self) -> str:
        if self.kind is Kind.NAN:
            return "nan"
        sign = "-" if self.negative else ""
        if self.kind is Kind.INFINITY:
            return sign + "inf"
        if self.kind is Kind.ZERO:
            return sign + "0"
        if self.fmt.radix == 10:
            return sign + str(Decimal(self.significand).scaleb(self.quantum_exponent))
        x = float(self.value)
        return repr(x) if Fraction(x) == self.value else str(self.value)

    def __lt__(self, other: ToyFloat) -> bool:
        return compare(self, other) == -1

    def __le__(self, other: ToyFloat) -> bool:
        return compare(self, other) in (-1, 0)

    def __gt__(self, other: ToyFloat) -> bool:
        return compare(self, other) == 1

    def __ge__(self, other: ToyFloat) -> bool:
        return compare(self, other) in (0, 1)


def _scale(radix: int, k: int) -> Fraction:
    return Fraction(radix ** k) if k >= 0 else Fraction(1, radix ** -k)


def compare(a: ToyFloat, b: ToyFloat) -> int | None:
    """-1, 0 or 1 like a numeric comparison; None when either is nan."""
    if a.is_nan or b.is_nan:
        return None
    ka, kb = _order_key(a), _order_key(b)
    return (ka > kb) - (ka < kb)


def _order_key(x: ToyFloat):
    if x.kind is Kind.INFINITY:
        return (-1 if x.negative else 1, 0)
    return (0, x.value)


def same_value(a: ToyFloat, b: ToyFloat) -> bool:
    """Numeric identity where nan matches nan and zeros match regardless of sign."""
    if a.is_nan or b.is_nan:
        return a.is_nan and b.is_nan
    return compare(a, b) == 0


# --------------------------------------------------------------------------
# rounding kernel


def _at_least_power(num: int, den: int, radix: int, e: int) -> bool:
    """num/den >= radix**e"""
    if e >= 0:
        return num >= den * radix ** e
    return num * radix ** -e >= den


def floor_log(num: int, den: int, radix: int) -> int:
    """Largest e with radix**e <= num/den, for positive num and den."""
    e = num.bit_length() - den.bit_length()
    if radix == 10:
        e = int(e * _LOG10_2)
    while not _at_least_power(num, den, radix, e):
        e -= 1
    while _at_least_power(num, den, radix, e + 1):
        e += 1
    return e


def _round_up(mode: RoundingMode, negative: bool, half: int, odd: bool) -> bool:
    """Whether an inexact magnitude is rounded to the larger neighbour.

    ``half`` is the sign of (discarded fraction - 1/2).
    """
    if mode is NEAREST_EVEN:
        return half > 0 or (half == 0 and odd)
    if mode is TOWARD_ZERO:
        return False
    if mode is AWAY_FROM_ZERO:
        return True
    if mode is TOWARD_POSITIVE:
        return not negative
    if mode is TOWARD_NEGATIVE:
        return negative
    if mode is FARTHEST_FROM_EXACT:
        return half < 0 or (half == 0 and not odd)
    raise UsageError(f"unsupported rounding mode {mode!r}")


def _overflow(fmt: FormatSpec, negative: bool, mode: RoundingMode):
    to_infinity = (mode in (NEAREST_EVEN, AWAY_FROM_ZERO, FARTHEST_FROM_EXACT)
                   or (mode is TOWARD_POSITIVE and not negative)
                   or (mode is TOWARD_NEGATIVE and negative))
    result = (ToyFloat.infinity(fmt, negative) if to_infinity
              else ToyFloat.max_finite(fmt, negative))
    return result, ExceptionFlags(inexact=True, overflow=True)


def round_parts(negative: bool, num: int, den: int, fmt: FormatSpec,
                mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    """Round the exact value ``(-1)**negative * num / den`` into ``fmt``."""
    if num == 0:
        return ToyFloat.zero(fmt, negative), NO_FLAGS
    radix, precision = fmt.radix, fmt.precision
    e = floor_log(num, den, radix)
    tiny = e < fmt.e_min
    if tiny and not fmt.subnormals:
        return _round_without_subnormals(negative, num, den, fmt, mode)
    exponent = max(e, fmt.e_min)
    quantum = exponent - precision + 1
    if quantum >= 0:
        scale = den * radix ** quantum
        significand, remainder = divmod(num, scale)
    else:
        scale = den
        significand, remainder = divmod(num * radix ** -quantum, den)
    inexact = remainder != 0
    if inexact:
        twice = 2 * remainder
        half = (twice > scale) - (twice < scale)
        if _round_up(mode, negative, half, significand % 2 == 1):
            significand += 1
            if significand == radix ** precision:
                significand = radix ** (precision - 1)
                exponent += 1
    if exponent > fmt.e_max:
        return _overflow(fmt, negative, mode)
    flags = ExceptionFlags(inexact=inexact, underflow=tiny and inexact)
    if significand == 0:
        return ToyFloat.zero(fmt, negative), flags
    return ToyFloat(fmt, Kind.FINITE, negative, significand, exponent), flags


def _round_without_subnormals(negative, num, den, fmt, mode):
    # The lattice below the smallest normal is {0, radix**e_min}.
    twice, bound = 2 * num, den
    if fmt.e_min >= 0:
        bound *= fmt.radix ** fmt.e_min
    else:
        twice *= fmt.radix ** -fmt.e_min
    half = (twice > bound) - (twice < bound)
    flags = ExceptionFlags(inexact=True, underflow=True)
    if _round_up(mode, negative, half, odd=False):
        smallest = ToyFloat(fmt, Kind.FINITE, negative,
                            fmt.radix ** (fmt.precision - 1), fmt.e_min)
        return smallest, flags
    return ToyFloat.zero(fmt, negative), flags


def round_rational(q, fmt: FormatSpec,
                   mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    """Round the finite rational ``q`` into ``fmt`` under ``mode``."""
    if not isinstance(q, Fraction):
        q = Fraction(q)
    return round_parts(q < 0, abs(q.numerator), q.denominator, fmt, mode)


def round_sqrt(q, fmt: FormatSpec,
               mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    """Correctly rounded square root of the rational ``q``."""
    q = Fraction(q)
    if q < 0:
        return ToyFloat.nan(fmt), ExceptionFlags(invalid=True)
    if q == 0:
        return ToyFloat.zero(fmt), NO_FLAGS
    radix = fmt.radix
    num, den = q.numerator, q.denominator
    # Compute floor(sqrt(q) / radix**t) with at least precision + 2 digits; an
    # inexact root is replaced by s + 1/4, which sits strictly between the
    # same lattice points and midpoints as the true root.
    t = floor_log(num, den, radix) // 2 - fmt.precision - 2
    if t >= 0:
        scaled_num, scaled_den = num, den * radix ** (2 * t)
    else:
        scaled_num, scaled_den = num * radix ** (-2 * t), den
    whole, rest = divmod(scaled_num, scaled_den)
    root = math.isqrt(whole)
    exact = rest == 0 and root * root == whole
    surrogate = Fraction(4 * root + (0 if exact else 1), 4) * _scale(radix, t)
    return round_rational(surrogate, fmt, mode)


# --------------------------------------------------------------------------
# arithmetic on ToyFloat


def _check_same(a: ToyFloat, b: ToyFloat) -> FormatSpec:
    if a.fmt != b.fmt:
        raise UsageError(f"format mismatch: {a.fmt} vs {b.fmt}")
    return a.fmt


def _signed_integer(x: ToyFloat, quantum: int) -> int:
    n = x.significand * x.fmt.radix ** (x.quantum_exponent - quantum)
    return -n if x.negative else n


def _from_scaled(negative: bool, magnitude: int, quantum: int, fmt, mode):
    if quantum >= 0:
        return round_parts(negative, magnitude * fmt.radix ** quantum, 1, fmt, mode)
    return round_parts(negative, magnitude, fmt.radix ** -quantum, fmt, mode)


def toy_add(a: ToyFloat, b: ToyFloat,
            mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    fmt = _check_same(a, b)
    if a.is_nan or b.is_nan:
        return ToyFloat.nan(fmt), NO_FLAGS
    if a.is_infinite or b.is_infinite:
        if a.is_infinite and b.is_infinite and a.negative != b.negative:
            return ToyFloat.nan(fmt), ExceptionFlags(invalid=True)
        return (a if a.is_infinite else b), NO_FLAGS
    if a.is_zero and b.is_zero:
        if a.negative == b.negative:
            return ToyFloat.zero(fmt, a.negative), NO_FLAGS
        return ToyFloat.zero(fmt, mode is TOWARD_NEGATIVE), NO_FLAGS
    if a.is_zero:
        return b, NO_FLAGS
    if b.is_zero:
        return a, NO_FLAGS
    quantum = min(a.quantum_exponent, b.quantum_exponent)
    total = _signed_integer(a, quantum) + _signed_integer(b, quantum)
    if total == 0:
        return ToyFloat.zero(fmt, mode is TOWARD_NEGATIVE), NO_FLAGS
    return _from_scaled(total < 0, abs(total), quantum, fmt, mode)


def toy_sub(a: ToyFloat, b: ToyFloat,
            mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    return toy_add(a, -b, mode)


def toy_mul(a: ToyFloat, b: ToyFloat,
            mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    fmt = _check_same(a, b)
    negative = a.negative != b.negative
    if a.is_nan or b.is_nan:
        return ToyFloat.nan(fmt), NO_FLAGS
    if a.is_infinite or b.is_infinite:
        if a.is_zero or b.is_zero:
            return ToyFloat.nan(fmt), ExceptionFlags(invalid=True)
        return ToyFloat.infinity(fmt, negative), NO_FLAGS
    if a.is_zero or b.is_zero:
        return ToyFloat.zero(fmt, negative), NO_FLAGS
    return _from_scaled(negative, a.significand * b.significand,
                        a.quantum_exponent + b.quantum_exponent, fmt, mode)


def toy_div(a: ToyFloat, b: ToyFloat,
            mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    fmt = _check_same(a, b)
    negative = a.negative != b.negative
    if a.is_nan or b.is_nan:
        return ToyFloat.nan(fmt), NO_FLAGS
    if a.is_infinite:
        if b.is_infinite:
            return ToyFloat.nan(fmt), ExceptionFlags(invalid=True)
        return ToyFloat.infinity(fmt, negative), NO_FLAGS
    if b.is_infinite:
        return ToyFloat.zero(fmt, negative), NO_FLAGS
    if b.is_zero:
        if a.is_zero:
            return ToyFloat.nan(fmt), ExceptionFlags(invalid=True)
        return ToyFloat.infinity(fmt, negative), ExceptionFlags(divide_by_zero=True)
    if a.is_zero:
        return ToyFloat.zero(fmt, negative), NO_FLAGS
    shift = a.quantum_exponent - b.quantum_exponent
    num = a.significand * fmt.radix ** max(shift, 0)
    den = b.significand * fmt.radix ** max(-shift, 0)
    return round_parts(negative, num, den, fmt, mode)


def toy_sqrt(a: ToyFloat, mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    if a.is_nan or a.is_zero:
        return a, NO_FLAGS
    if a.negative:
        return ToyFloat.nan(a.fmt), ExceptionFlags(invalid=True)
    if a.is_infinite:
        return a, NO_FLAGS
    return round_sqrt(a.value, a.fmt, mode)


# --------------------------------------------------------------------------
# lattice geometry


def _require_number(x: ToyFloat, what: str) -> None:
    if x.is_nan:
        raise UsageError(f"{what} of nan is undefined")


def successor(x: ToyFloat) -> ToyFloat:
    """Smallest format value strictly greater than ``x``."""
    _require_number(x, "successor")
    fmt = x.fmt
    if x.is_infinite:
        return x if not x.negative else ToyFloat.max_finite(fmt, negative=True)
    if x.is_zero:
        return _smallest_positive(fmt)
    if x.negative:
        return -predecessor(-x)
    significand, exponent = x.significand + 1, x.exponent
    if significand == fmt.radix ** fmt.precision:
        significand, exponent = fmt.radix ** (fmt.precision - 1), exponent + 1
        if exponent > fmt.e_max:
            return ToyFloat.infinity(fmt)
    return ToyFloat(fmt, Kind.FINITE, False, significand, exponent)


def predecessor(x: ToyFloat) -> ToyFloat:
    """Largest format value strictly less than ``x``."""
    _require_number(x, "predecessor")
    fmt = x.fmt
    if x.is_infinite:
        return x if x.negative else ToyFloat.max_finite(fmt)
    if x.is_zero:
        return -_smallest_positive(fmt)
    if x.negative:
        return -successor(-x)
    leading = fmt.radix ** (fmt.precision - 1)
    if x.exponent == fmt.e_min and (x.significand == 1 or
                                     (not fmt.subnormals and x.significand == leading)):
        return ToyFloat.zero(fmt)
    if x.significand == leading and x.exponent > fmt.e_min:
        return ToyFloat(fmt, Kind.FINITE, False, fmt.max_significand, x.exponent - 1)
    return ToyFloat(fmt, Kind.FINITE, False, x.significand - 1, x.exponent)


def _smallest_positive(fmt: FormatSpec) -> ToyFloat:
    significand = 1 if fmt.subnormals else fmt.radix ** (fmt.precision - 1)
    return ToyFloat(fmt, Kind.FINITE, False, significand, fmt.e_min)


def ulp(x: ToyFloat) -> Fraction:
    """Spacing of the lattice at ``x`` (the quantum of its binade)."""
    if not x.is_finite:
        raise UsageError(f"ulp of {x.kind.value} is undefined")
    fmt = x.fmt
    if x.is_zero and not fmt.subnormals:
        return fmt.min_normal
    return _scale(fmt.radix, x.quantum_exponent)


def ulp_of(q, fmt: FormatSpec) -> Fraction:
    """ulp of the nearest format value to the rational ``q`` (finite range only)."""
    rounded, _ = round_rational(q, fmt)
    if rounded.is_infinite:
        return ulp(ToyFloat.max_finite(fmt))
    return ulp(rounded)


def _bracket(q: Fraction, fmt: FormatSpec) -> tuple[ToyFloat, ToyFloat]:
    below, _ = round_rational(q, fmt, TOWARD_NEGATIVE)
    above, _ = round_rational(q, fmt, TOWARD_POSITIVE)
    return below, above


def is_faithful_rounding(q, x: ToyFloat) -> bool:
    """True if ``x`` is one of the two lattice values bracketing ``q``."""
    if not x.is_finite:
        raise UsageError("faithfulness is only defined for finite values")
    q = Fraction(q)
    return any(n.is_finite and n.value == x.value for n in _bracket(q, x.fmt))


def is_correct_rounding(q, x: ToyFloat) -> bool:
    """True if ``x`` is the round-to-nearest-even image of ``q``."""
    if not x.is_finite:
        raise UsageError("correct rounding is only defined for finite values")
    nearest, _ = round_rational(q, x.fmt, NEAREST_EVEN)
    return nearest.is_finite and nearest.value == x.value


class DoubleRounding(NamedTuple):
    chained: ToyFloat
    direct: ToyFloat
    differs: bool


def convert(x: ToyFloat, fmt: FormatSpec,
            mode: RoundingMode = NEAREST_EVEN) -> tuple[ToyFloat, ExceptionFlags]:
    """Round a value of one format into another."""
    if x.is_nan:
        return ToyFloat.nan(fmt), NO_FLAGS
    if x.is_infinite:
        return ToyFloat.infinity(fmt, x.negative), NO_FLAGS
    if x.is_zero:
        return ToyFloat.zero(fmt, x.negative), NO_FLAGS
    k = x.quantum_exponent
    radix = x.fmt.radix
    if k >= 0:
        return round_parts(x.negative, x.significand * radix ** k, 1, fmt, mode)
    return round_parts(x.negative, x.significand, radix ** -k, fmt, mode)


def double_round(q, fmt_high: FormatSpec, fmt_low: FormatSpec,
                 mode: RoundingMode = NEAREST_EVEN) -> DoubleRounding:
    """Compare rounding through ``fmt_high`` with rounding straight to ``fmt_low``."""
    if fmt_high.radix != fmt_low.radix:
        raise UsageError("double rounding needs formats of the same radix")
    if fmt_low.precision >= fmt_high.precision:
        raise UsageError("the low format must be strictly less precise")
    q = Fraction(q)
    intermediate, _ = round_rational(q, fmt_high, mode)
    chained, _ = convert(intermediate, fmt_low, mode)
    direct, _ = round_rational(q, fmt_low, mode)
    return DoubleRounding(chained, direct, not same_value(chained, direct))
