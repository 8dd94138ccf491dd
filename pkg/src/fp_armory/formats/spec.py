"""Format descriptions, rounding modes and exception flags."""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction

from ..errors import ParseError, UsageError


class RoundingMode(enum.Enum):
    NEAREST_EVEN = "nearest-even"
    TOWARD_POSITIVE = "toward-positive"
    TOWARD_NEGATIVE = "toward-negative"
    TOWARD_ZERO = "toward-zero"
    AWAY_FROM_ZERO = "away-from-zero"
    # Picks the neighbour on the far side of the exact value; at an exact
    # midpoint it picks the odd significand (the opposite of NEAREST_EVEN).
    FARTHEST_FROM_EXACT = "farthest-from-exact"

    @classmethod
    def parse(cls, text: str) -> RoundingMode:
        key = text.strip().lower().replace("_", "-")
        for mode in cls:
            if mode.value == key or mode.name.lower().replace("_", "-") == key:
                return mode
        raise UsageError(f"unknown rounding mode {text!r}")


NEAREST_EVEN = RoundingMode.NEAREST_EVEN
TOWARD_POSITIVE = RoundingMode.TOWARD_POSITIVE
TOWARD_NEGATIVE = RoundingMode.TOWARD_NEGATIVE
TOWARD_ZERO = RoundingMode.TOWARD_ZERO
AWAY_FROM_ZERO = RoundingMode.AWAY_FROM_ZERO
FARTHEST_FROM_EXACT = RoundingMode.FARTHEST_FROM_EXACT


@dataclass(frozen=True)
class ExceptionFlags:
    """IEEE-style status bits, returned alongside results."""

    inexact: bool = False
    underflow: bool = False
    overflow: bool = False
    invalid: bool = False
    divide_by_zero: bool = False

    def __or__(self, other: ExceptionFlags) -> ExceptionFlags:
        return ExceptionFlags(
            self.inexact or other.inexact,
            self.underflow or other.underflow,
            self.overflow or other.overflow,
            self.invalid or other.invalid,
            self.divide_by_zero or other.divide_by_zero,
        )

    def __bool__(self) -> bool:
        return (self.inexact or self.underflow or self.overflow
                or self.invalid or self.divide_by_zero)

    def raised(self) -> list[str]:
        return [name for name in ("inexact", "underflow", "overflow",
                                  "invalid", "divide_by_zero")
                if getattr(self, name)]


NO_FLAGS = ExceptionFlags()


@dataclass(frozen=True)
class FormatSpec:
    """A finite floating-point format F(radix, precision, [e_min, e_max]).

    Finite nonzero values are ``±d * radix**(q - precision + 1)`` where the
    integer significand ``d`` has at most ``precision`` digits and ``q`` is
    the exponent of the leading digit, ``e_min <= q <= e_max``.  Numbers
    below ``radix**e_min`` are subnormal and only exist when
    ``subnormals`` is true.
    """

    radix: int
    precision: int
    e_min: int
    e_max: int
    subnormals: bool = True
    name: str | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.radix not in (2, 10):
            raise UsageError(f"radix must be 2 or 10, got {self.radix}")
        if self.precision < 1:
            raise UsageError(f"precision must be >= 1, got {self.precision}")
        if not self.e_min < self.e_max:
            raise UsageError(f"need e_min < e_max, got {self.e_min}, {self.e_max}")

    def __str__(self) -> str:
        if self.name:
            return self.name
        text = f"toy:{self.radix},{self.precision},{self.e_min},{self.e_max}"
        return text if self.subnormals else text + ",nosub"

    @property
    def max_significand(self) -> int:
        return self.radix ** self.precision - 1

    @property
    def max_finite(self) -> Fraction:
        return self.max_significand * _power(self.radix, self.e_max - self.precision + 1)

    @property
    def min_normal(self) -> Fraction:
        return _power(self.radix, self.e_min)

    @property
    def min_positive(self) -> Fraction:
        if self.subnormals:
            return _power(self.radix, self.e_min - self.precision + 1)
        return self.min_normal

    @property
    def epsilon(self) -> Fraction:
        """Gap between 1 and the next larger value."""
        return _power(self.radix, 1 - self.precision)

    @property
    def unit_roundoff(self) -> Fraction:
        """Largest relative error of round-to-nearest in the normal range."""
        return self.epsilon / 2

    @property
    def decimal_digits(self) -> float:
        """Decimal capacity of the significand, ``precision * log10(radix)``."""
        return self.precision * math.log10(self.radix)

    def is_binary64(self) -> bool:
        return self == BINARY64


def _power(radix: int, k: int) -> Fraction:
    return Fraction(radix ** k) if k >= 0 else Fraction(1, radix ** -k)


BINARY16 = FormatSpec(2, 11, -14, 15, name="binary16")
BINARY32 = FormatSpec(2, 24, -126, 127, name="binary32")
BINARY64 = FormatSpec(2, 53, -1022, 1023, name="binary64")

NAMED_FORMATS = {f.name: f for f in (BINARY16, BINARY32, BINARY64)}
NAMED_FORMATS.update(half=BINARY16, single=BINARY32, double=BINARY64)

# Exponent range used when a toy spec omits it.
DEFAULT_TOY_EXPONENTS = (-99, 99)

_TOY = re.compile(r"toy:([^,]+),([^,]+)(?:,([^,]+),([^,]+))?(,nosub)?")


def parse_format(text: str) -> FormatSpec:
    """Parse ``binary16|binary32|binary64`` or ``toy:<radix>,<p>[,<emin>,<emax>][,nosub]``."""
    key = text.strip()
    if key.lower() in NAMED_FORMATS:
        return NAMED_FORMATS[key.lower()]
    match = _TOY.fullmatch(key)
    if match is None:
        raise ParseError("malformed format spec", text, 0)
    fields = []
    for index in range(1, 5):
        group = match.group(index)
        if group is None:
            continue
        try:
            fields.append(int(group))
        except ValueError:
            raise ParseError("expected an integer", text, match.start(index)) from None
    if len(fields) == 2:
        fields.extend(DEFAULT_TOY_EXPONENTS)
    radix, precision, e_min, e_max = fields
    return FormatSpec(radix, precision, e_min, e_max, subnormals=match.group(5) is None)


def as_format(fmt: FormatSpec | str | None) -> FormatSpec:
    if fmt is None:
        return BINARY64
    if isinstance(fmt, str):
        return parse_format(fmt)
    return fmt
