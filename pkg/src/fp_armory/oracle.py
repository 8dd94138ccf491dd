"""Exact rational ground truth and correctly rounded decimal conversion.

``ExactRational`` is :class:`fractions.Fraction`: always reduced, positive
denominator, unbounded integers.  Every binary float has a power-of-two
denominator and therefore a finite decimal expansion.
"""

from __future__ import annotations

import math
import random
import re
from collections import defaultdict
from collections.abc import Iterable
from fractions import Fraction

from .errors import ParseError, UsageError
from .formats.spec import BINARY64, NEAREST_EVEN, FormatSpec, as_format
from .formats.toyfloat import ToyFloat, floor_log, round_rational, same_value, ulp_of

ExactRational = Fraction

_DECIMAL = re.compile(r"[-+]?(\d+)(?:\.(\d+))?(?:[eE][-+]?\d+)?")


def from_float(x) -> Fraction:
    """Exact value of a native float, a ToyFloat, an int or a Fraction."""
    if isinstance(x, ToyFloat):
        if not x.is_finite:
            raise UsageError(f"{x} has no exact rational value")
        return x.value
    if isinstance(x, (Fraction, int)):
        return Fraction(x)
    x = float(x)
    if not math.isfinite(x):
        raise UsageError(f"{x} has no exact rational value")
    return Fraction(x)


def rat_add(a, b) -> Fraction:
    return Fraction(a) + Fraction(b)


def rat_sub(a, b) -> Fraction:
    return Fraction(a) - Fraction(b)


def rat_mul(a, b) -> Fraction:
    return Fraction(a) * Fraction(b)


def rat_div(a, b) -> Fraction:
    b = Fraction(b)
    if b == 0:
        raise UsageError("rational division by zero")
    return Fraction(a) / b


def rat_compare(a, b) -> int:
    """-1, 0 or 1 as ``a`` is below, equal to or above ``b``."""
    a, b = Fraction(a), Fraction(b)
    return (a > b) - (a < b)


def parse_decimal(text: str) -> Fraction:
    """Exact value of a decimal literal ``[-+]?digits[.digits][(e|E)[-+]?digits]``."""
    s = text.strip()
    offset = len(text) - len(text.lstrip())
    match = _DECIMAL.match(s)
    if match is None or match.end() != len(s):
        position = 0 if match is None else match.end()
        if match is None and s[:1] in "+-":
            position = 1
        raise ParseError("malformed decimal literal", text, offset + position)
    return Fraction(s)


def _terminating_digits(q: Fraction) -> tuple[int, int]:
    """``(n, k)`` with ``|q| = n / 10**k``; requires a 2-5-smooth denominator."""
    den = q.denominator
    twos = (den & -den).bit_length() - 1
    rest = den >> twos
    fives = 0
    while rest % 5 == 0:
        rest //= 5
        fives += 1
    if rest != 1:
        raise UsageError(f"{q} has no finite decimal expansion")
    k = max(twos, fives)
    n = abs(q.numerator) * 2 ** (k - twos) * 5 ** (k - fives)
    return n, k


def format_terminating(q: Fraction) -> str:
    """Plain positional decimal string of a rational with a finite expansion."""
    n, k = _terminating_digits(Fraction(q))
    sign = "-" if q < 0 else ""
    if k == 0:
        return sign + str(n)
    digits = str(n).rjust(k + 1, "0")
    return sign + digits[:-k] + "." + digits[-k:]


def exact_decimal_string(x) -> str:
    """Full decimal expansion of a finite binary float (or canonical decimal toy)."""
    if isinstance(x, ToyFloat) and x.fmt.radix == 10:
        return str(x)
    if isinstance(x, float) and x == 0 and math.copysign(1.0, x) < 0:
        return "-0"
    return format_terminating(from_float(x))


def _format_digits(negative: bool, digits: str, exponent: int) -> str:
    """Render significand digits ``d.ddd x 10**exponent`` the way ``repr`` does."""
    sign = "-" if negative else ""
    digits = digits.rstrip("0") or "0"
    if -4 <= exponent < 16:
        if exponent >= len(digits) - 1:
            return sign + digits + "0" * (exponent - len(digits) + 1)
        if exponent >= 0:
            return sign + digits[:exponent + 1] + "." + digits[exponent + 1:]
        return sign + "0." + "0" * (-exponent - 1) + digits
    mantissa = digits[0] + ("." + digits[1:] if len(digits) > 1 else "")
    return f"{sign}{mantissa}e{exponent:+03d}"


def _max_digits(fmt: FormatSpec) -> int:
    if fmt.radix == 10:
        return fmt.precision
    return math.ceil(fmt.precision * math.log10(2)) + 2


def _rounds_to(value: Fraction, fmt: FormatSpec, target: ToyFloat) -> bool:
    return same_value(round_rational(value, fmt, NEAREST_EVEN)[0], target)


def shortest_roundtrip_decimal(x, fmt: FormatSpec | str | None = None) -> str:
    """Fewest-digit decimal literal that rounds back to ``x`` in ``fmt``."""
    fmt = as_format(fmt)
    if isinstance(x, ToyFloat):
        target = x
    else:
        x = float(x) if not isinstance(x, Fraction) else x
        if isinstance(x, float) and not math.isfinite(x):
            return "nan" if x != x else ("-inf" if x < 0 else "inf")
        target = round_rational(Fraction(x), fmt, NEAREST_EVEN)[0]
        if isinstance(x, float) and x == 0:
            return "-0" if math.copysign(1.0, x) < 0 else "0"
    if not target.is_finite:
        return str(target)
    if target.is_zero:
        return "-0" if target.negative else "0"
    v = abs(target.value)
    e = floor_log(v.numerator, v.denominator, 10)
    for d in range(1, _max_digits(fmt) + 1):
        scale = Fraction(10) ** (e - d + 1)
        scaled = v / scale
        low = math.floor(scaled)
        nearest = round(scaled)
        best = None
        for n in sorted({low, low + 1, nearest}, key=lambda m: (abs(m - scaled), m % 2)):
            if n == 0:
                continue
            candidate = n * scale
            if target.negative:
                candidate = -candidate
            if _rounds_to(candidate, fmt, target):
                best = n
                break
        if best is not None:
            digits = str(best)
            exponent = e + len(digits) - d
            return _format_digits(target.negative, digits, exponent)
    # Unreachable for valid formats: the exact expansion always round-trips.
    return exact_decimal_string(target)


def round_to_digits(q: Fraction, digits: int) -> Fraction:
    """Nearest (ties to even) value with ``digits`` significant decimal digits."""
    q = Fraction(q)
    if q == 0:
        return q
    e = floor_log(abs(q.numerator), q.denominator, 10)
    scale = Fraction(10) ** (e - digits + 1)
    return round(q / scale) * scale


def _roundtrip_fails(literal: Fraction, fmt: FormatSpec, digits: int) -> bool:
    stored = round_rational(literal, fmt, NEAREST_EVEN)[0]
    if not stored.is_finite or stored.is_zero or stored.is_subnormal:
        return False
    return round_to_digits(stored.value, digits) != literal


def _literal(mantissa: int, exponent: int, digits: int) -> str:
    text = str(mantissa)
    return f"{text[0]}.{text[1:]}e{exponent}" if digits > 1 else f"{text}e{exponent}"


def _decade_range(fmt: FormatSpec) -> tuple[int, int]:
    low, high = fmt.min_normal, fmt.max_finite
    return (floor_log(low.numerator, low.denominator, 10) + 1,
            floor_log(high.numerator, high.denominator, 10) - 1)


def find_roundtrip_failure(fmt: FormatSpec | str, digits: int, *, budget: int = 20000,
                           radius: int = 6, seed: int = 0,
                           exhaustive: bool = False) -> str | None:
    """Search for a ``digits``-digit decimal that does not survive ``fmt``.

    A literal ``s`` fails when printing ``round(s)`` back to ``digits``
    significant digits does not reproduce ``s``.  The search scans ``radius``
    consecutive literals on each side of every power of two and power of ten
    in the normal range (where the two spacings are most out of step), then
    tries ``budget`` random literals.  ``exhaustive`` sweeps every literal of
    every decade instead, which is only practical for small ``digits``.
    """
    fmt = as_format(fmt)
    if digits < 1:
        raise UsageError("digits must be >= 1")
    low_m, high_m = 10 ** (digits - 1), 10 ** digits - 1
    first, last = _decade_range(fmt)

    def check(mantissa: int, exponent: int) -> str | None:
        if not low_m <= mantissa <= high_m:
            return None
        literal = Fraction(mantissa) * Fraction(10) ** (exponent - digits + 1)
        if _roundtrip_fails(literal, fmt, digits):
            return _literal(mantissa, exponent, digits)
        return None

    if exhaustive:
        if digits > 8:
            raise UsageError("exhaustive sweeps are limited to 8 digits")
        for exponent in range(first, last + 1):
            for mantissa in range(low_m, high_m + 1):
                found = check(mantissa, exponent)
                if found:
                    return found
        return None

    anchors: list[Fraction] = []
    if fmt.radix == 2:
        e_lo = fmt.e_min
        e_hi = fmt.e_max
        anchors.extend(Fraction(2) ** k for k in range(e_lo + 1, e_hi + 1))
    anchors.extend(Fraction(10) ** k for k in range(first, last + 1))
    for anchor in anchors:
        e = floor_log(anchor.numerator, anchor.denominator, 10)
        centre = math.floor(anchor / Fraction(10) ** (e - digits + 1))
        for mantissa in range(centre - radius, centre + radius + 1):
            found = check(mantissa, e)
            if found:
                return found
        # below a power of ten the previous decade applies
        for mantissa in range(high_m - radius, high_m + 1):
            found = check(mantissa, e - 1)
            if found:
                return found
    rng = random.Random(seed)
    for _ in range(budget):
        found = check(rng.randint(low_m, high_m), rng.randint(first, last))
        if found:
            return found
    return None


def exact_sum(xs: Iterable) -> Fraction:
    """Exact sum of floats (or rationals), grouping terms by denominator."""
    if hasattr(xs, "tolist"):
        xs = xs.tolist()
    groups: dict[int, int] = defaultdict(int)
    for x in xs:
        num, den = x.as_integer_ratio()
        groups[den] += num
    total = Fraction(0)
    for den, num in groups.items():
        total += Fraction(num, den)
    return total


def sqrt_rational(q, bits: int = 200) -> Fraction:
    """``sqrt(q)`` truncated to about ``bits`` significant bits (never above it)."""
    q = Fraction(q)
    if q < 0:
        raise UsageError("square root of a negative rational")
    if q == 0:
        return q
    shift = bits - (q.numerator.bit_length() - q.denominator.bit_length()) // 2
    scaled = q.numerator * 4 ** shift // q.denominator if shift >= 0 else \
        q.numerator // (q.denominator * 4 ** -shift)
    return Fraction(math.isqrt(scaled), 2 ** shift) if shift >= 0 else \
        Fraction(math.isqrt(scaled) * 2 ** -shift)


def relative_error(result, exact) -> Fraction | float:
    """``|result - exact| / |exact|``; infinite for non-finite results."""
    if isinstance(result, float) and not math.isfinite(result):
        return math.inf
    exact = Fraction(exact)
    diff = abs(Fraction(result) - exact)
    if exact == 0:
        return Fraction(0) if diff == 0 else math.inf
    return diff / abs(exact)


def error_ulps(result, exact, fmt: FormatSpec | str | None = None) -> Fraction | float:
    """``|result - exact|`` in units of the lattice spacing at ``exact``."""
    if isinstance(result, float) and not math.isfinite(result):
        return math.inf
    fmt = as_format(fmt)
    return abs(Fraction(result) - Fraction(exact)) / ulp_of(Fraction(exact), fmt)


def correct_digits(result, exact) -> float:
    """Number of correct significant decimal digits, ``-log10(relative error)`` (>= 0)."""
    rel = relative_error(result, exact)
    if rel == 0:
        return math.inf
    if rel == math.inf:
        return 0.0
    return max(0.0, -math.log10(rel))


__all__ = [
    "ExactRational", "from_float", "rat_add", "rat_sub", "rat_mul", "rat_div",
    "rat_compare", "parse_decimal", "format_terminating", "exact_decimal_string",
    "shortest_roundtrip_decimal", "round_to_digits", "find_roundtrip_failure",
    "exact_sum", "sqrt_rational", "relative_error", "error_ulps", "correct_digits",
    "BINARY64",
]
