"""Randomized and directed rounding to measure how much of a result is noise.

A computation is any callable taking an :class:`Arithmetic` context and
returning a number.  Under the random policy each inexact operation is
rounded up or down by a fair coin; under a directed policy every operation
uses one fixed mode.  Rounding is chosen from the round-to-nearest result
and the sign of its error-free residual, so exact operations are never
perturbed.

Per-sample random streams are derived from ``(seed, sample index)``, so the
report does not depend on the order in which samples are evaluated.
"""

from __future__ import annotations

import math
import random
import statistics
from collections.abc import Callable, Sequence
from concurrent.futures import Executor
from dataclasses import dataclass
from fractions import Fraction

from .errors import UsageError
from .formats import (
    FARTHEST_FROM_EXACT,
    NEAREST_EVEN,
    TOWARD_NEGATIVE,
    TOWARD_POSITIVE,
    TOWARD_ZERO,
    Arithmetic,
    FormatSpec,
    RoundingMode,
    arithmetic,
    as_format,
)

RANDOM = "random"
DIRECTED_MODES = (NEAREST_EVEN, TOWARD_POSITIVE, TOWARD_NEGATIVE, TOWARD_ZERO,
                  FARTHEST_FROM_EXACT)
_SEED_MASK = (1 << 64) - 1


class RandomRoundingArithmetic(Arithmetic):
    """Each operation rounds toward +inf or -inf, chosen by a fair coin."""

    mode = None

    def __init__(self, fmt: FormatSpec, rng: random.Random):
        self.fmt = fmt
        self.rng = rng
        self.up = arithmetic(fmt, TOWARD_POSITIVE)
        self.down = arithmetic(fmt, TOWARD_NEGATIVE)

    def _pick(self) -> Arithmetic:
        return self.up if self.rng.random() < 0.5 else self.down

    def coerce(self, x):
        return self.up.coerce(x)

    def add(self, a, b):
        return self._pick().add(a, b)

    def sub(self, a, b):
        return self._pick().sub(a, b)

    def mul(self, a, b):
        return self._pick().mul(a, b)

    def div(self, a, b):
        return self._pick().div(a, b)

    def sqrt(self, a):
        return self._pick().sqrt(a)

    def fma(self, a, b, c):
        return self._pick().fma(a, b, c)

    def call(self, func: Callable, x):
        """A library function, assumed correctly rounded, perturbed as one operation.

        Without its residual the true value is unknown; the result is the
        returned value or, with probability 1/2, its neighbour on a random side.
        """
        value = func(float(x))
        if self.rng.random() < 0.5 or not math.isfinite(value):
            return value
        return math.nextafter(value, math.inf if self.rng.random() < 0.5 else -math.inf)

    def __repr__(self) -> str:
        return f"RandomRoundingArithmetic({self.fmt})"


def policy_arithmetic(policy, fmt: FormatSpec | str | None = None,
                      rng: random.Random | None = None) -> Arithmetic:
    """Context for ``policy``: ``"random"`` or a :class:`RoundingMode` (or its name)."""
    fmt = as_format(fmt)
    if policy == RANDOM:
        return RandomRoundingArithmetic(fmt, rng if rng is not None else random.Random(0))
    if isinstance(policy, str):
        policy = RoundingMode.parse(policy)
    return arithmetic(fmt, policy)


_BINOPS = {"+": "add", "-": "sub", "*": "mul", "/": "div",
           "×": "mul", "÷": "div", "−": "sub"}


def perturbed_binop(a, b, op: str, policy=RANDOM, rng: random.Random | None = None,
                    fmt: FormatSpec | str | None = None):
    """One operation under ``policy``; exact results come back unchanged."""
    try:
        name = _BINOPS[op]
    except KeyError:
        raise UsageError(f"unknown operation {op!r}") from None
    return getattr(policy_arithmetic(policy, fmt, rng), name)(a, b)


class InstrumentedValue:
    """A number whose arithmetic goes through a context's rounding policy."""

    __slots__ = ("value", "context")

    def __init__(self, value, context: Arithmetic):
        self.value = value.value if isinstance(value, InstrumentedValue) else value
        self.context = context

    def _wrap(self, value) -> InstrumentedValue:
        return InstrumentedValue(value, self.context)

    @staticmethod
    def _raw(x):
        return x.value if isinstance(x, InstrumentedValue) else x

    def __add__(self, other):
        return self._wrap(self.context.add(self.value, self._raw(other)))

    def __radd__(self, other):
        return self._wrap(self.context.add(self._raw(other), self.value))

    def __sub__(self, other):
        return self._wrap(self.context.sub(self.value, self._raw(other)))

    def __rsub__(self, other):
        return self._wrap(self.context.sub(self._raw(other), self.value))

    def __mul__(self, other):
        return self._wrap(self.context.mul(self.value, self._raw(other)))

    def __rmul__(self, other):
        return self._wrap(self.context.mul(self._raw(other), self.value))

    def __truediv__(self, other):
        return self._wrap(self.context.div(self.value, self._raw(other)))

    def __rtruediv__(self, other):
        return self._wrap(self.context.div(self._raw(other), self.value))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 1:
            raise UsageError("only positive integer powers are instrumented")
        result = self
        for _ in range(k - 1):
            result = result * self
        return result

    def __neg__(self):
        return self._wrap(-self.value)

    def __abs__(self):
        return self._wrap(abs(self.value))

    def sqrt(self):
        return self._wrap(self.context.sqrt(self.value))

    def __float__(self) -> float:
        return float(self.value)

    def __eq__(self, other):
        return self.value == self._raw(other)

    def __lt__(self, other):
        return self.value < self._raw(other)

    def __le__(self, other):
        return self.value <= self._raw(other)

    def __gt__(self, other):
        return self.value > self._raw(other)

    def __ge__(self, other):
        return self.value >= self._raw(other)

    __hash__ = None

    def __repr__(self) -> str:
        return f"InstrumentedValue({self.value!r})"


def instrument(context: Arithmetic, x) -> InstrumentedValue:
    return InstrumentedValue(x, context)


@dataclass(frozen=True)
class StochasticReport:
    n_samples: int
    results: tuple
    mean: float
    stddev: float
    significant_digits: float
    seed: int
    flagged: int
    cap: float


def significant_digits(mean: float, stddev: float, cap: float) -> float:
    """``-log10(stddev / |mean|)`` clamped to ``[0, cap]``; ``cap`` when there is no spread."""
    if stddev == 0:
        return cap
    if mean == 0 or not math.isfinite(stddev):
        return 0.0
    return min(cap, max(0.0, -math.log10(stddev / abs(mean))))


def sample_rng(seed: int, index: int) -> random.Random:
    """Independent stream for one sample, a function of ``(seed, index)`` only."""
    return random.Random(((seed & _SEED_MASK) << 64) | index)


def _evaluate(computation: Callable, fmt: FormatSpec, policy, seed: int, index: int) -> float:
    context = policy_arithmetic(policy, fmt, sample_rng(seed, index))
    value = computation(context)
    if isinstance(value, InstrumentedValue):
        value = value.value
    return float(value)


def run_stochastic(computation: Callable[[Arithmetic], object], n: int = 16, seed: int = 0,
                   policy=RANDOM, fmt: FormatSpec | str | None = None,
                   executor: Executor | None = None) -> StochasticReport:
    """Evaluate ``computation`` ``n`` times under ``policy`` and summarize the spread.

    Non-finite samples are kept in ``results``, counted in ``flagged`` and
    left out of the statistics.  With an ``executor`` samples run
    concurrently; the report is identical either way.
    """
    if n < 2:
        raise UsageError("run_stochastic needs n >= 2")
    if not 0 <= seed <= _SEED_MASK:
        raise UsageError("seed must be a 64-bit unsigned integer")
    fmt = as_format(fmt)
    args = [(computation, fmt, policy, seed, i) for i in range(n)]
    if executor is None:
        results = tuple(_evaluate(*a) for a in args)
    else:
        results = tuple(executor.map(_evaluate, *zip(*args)))
    finite = [r for r in results if math.isfinite(r)]
    flagged = len(results) - len(finite)
    cap = fmt.decimal_digits
    if len(finite) >= 2:
        mean = _exact_mean(finite)
        stddev = statistics.stdev(finite, mean)
        digits = significant_digits(mean, stddev, cap)
    else:
        mean = finite[0] if finite else math.nan
        stddev = math.nan
        digits = 0.0
    return StochasticReport(n, results, mean, stddev, digits, seed, flagged, cap)


def _exact_mean(values: Sequence[float]) -> float:
    return float(sum(map(Fraction, values)) / len(values))


def run_directed_suite(computation: Callable[[Arithmetic], object],
                       fmt: FormatSpec | str | None = None,
                       modes: Sequence[RoundingMode] = DIRECTED_MODES) -> dict[RoundingMode, float]:
    """One evaluation per rounding mode; see :func:`directed_spread`."""
    fmt = as_format(fmt)
    results = {}
    for mode in modes:
        value = computation(arithmetic(fmt, mode))
        if isinstance(value, InstrumentedValue):
            value = value.value
        results[mode] = float(value)
    return results


def directed_spread(results: dict) -> float:
    """Largest pairwise difference between the per-mode results."""
    values = list(results.values())
    if any(not math.isfinite(v) for v in values):
        return math.inf
    return max(values) - min(values)


__all__ = [
    "DIRECTED_MODES", "InstrumentedValue", "RANDOM", "RandomRoundingArithmetic",
    "StochasticReport", "directed_spread", "instrument", "perturbed_binop",
    "policy_arithmetic", "run_directed_suite", "run_stochastic", "sample_rng",
    "significant_digits",
]
