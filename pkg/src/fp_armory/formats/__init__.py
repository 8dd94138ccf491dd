"""Finite floating-point formats simulated in software."""

from .arithmetic import (
    Arithmetic,
    Binary64Arithmetic,
    CountingArithmetic,
    EmulatedBinaryArithmetic,
    RationalArithmetic,
    arithmetic,
    ieee_div,
    ieee_sqrt,
)
from .native import embeds_in_binary64, round_float
from .spec import (
    AWAY_FROM_ZERO,
    BINARY16,
    BINARY32,
    BINARY64,
    DEFAULT_TOY_EXPONENTS,
    FARTHEST_FROM_EXACT,
    NAMED_FORMATS,
    NEAREST_EVEN,
    NO_FLAGS,
    TOWARD_NEGATIVE,
    TOWARD_POSITIVE,
    TOWARD_ZERO,
    ExceptionFlags,
    FormatSpec,
    RoundingMode,
    as_format,
    parse_format,
)
from .toyfloat import (
    DoubleRounding,
    Kind,
    ToyFloat,
    compare,
    convert,
    double_round,
    is_correct_rounding,
    is_faithful_rounding,
    predecessor,
    round_parts,
    round_rational,
    round_sqrt,
    same_value,
    successor,
    toy_add,
    toy_div,
    toy_mul,
    toy_sqrt,
    toy_sub,
    ulp,
    ulp_of,
)

__all__ = [name for name in dir() if not name.startswith("_")]
