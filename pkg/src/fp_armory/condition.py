"""Condition numbers, digits-lost accounting and the minimization-resolution probe."""

from __future__ import annotations

import math
from collections.abc import Callable
from dataclasses import dataclass
from fractions import Fraction
from typing import NamedTuple

from .errors import DiagnosticError, DomainError, UsageError
from .formats import Arithmetic, FormatSpec, arithmetic

# Central differences balance truncation (h^2) against rounding (eps/h).
_STEP_EPS = 2.0 ** -52


@dataclass(frozen=True)
class ConditionReport:
    """Relative condition number with its cost in decimal digits and bits."""

    kappa: float | Fraction
    digits_lost_dec: float
    bits_lost: float
    singular: bool

    @classmethod
    def from_kappa(cls, kappa, singular: bool = False) -> ConditionReport:
        k = float(kappa)
        if math.isinf(k) or math.isnan(k):
            return cls(math.inf, math.inf, math.inf, True)
        if k == 0:
            return cls(kappa, -math.inf, -math.inf, singular)
        return cls(kappa, math.log10(k), math.log2(k), singular)


def kappa_analytic(f: Callable, df: Callable, x) -> ConditionReport:
    """``|x f'(x) / f(x)|``, the absolute elasticity; a zero of ``f`` is singular.

    Exact when ``x`` is a Fraction and ``f``, ``df`` use rational arithmetic.
    """
    fx = f(x)
    numerator = x * df(x)
    if fx == 0:
        return ConditionReport.from_kappa(math.inf, singular=True)
    return ConditionReport.from_kappa(abs(numerator / fx))


def kappa_numeric(f: Callable, x: float) -> ConditionReport:
    """Condition number with a central-difference derivative, step ``max(|x|,1) eps**(1/3)``."""
    x = float(x)
    h = max(abs(x), 1.0) * _STEP_EPS ** (1 / 3)
    try:
        fx, right, left = f(x), f(x + h), f(x - h)
    except (ValueError, ZeroDivisionError, OverflowError):
        return ConditionReport.from_kappa(math.inf, singular=True)
    if not all(math.isfinite(v) for v in (fx, right, left)) or fx == 0:
        return ConditionReport.from_kappa(math.inf, singular=True)
    derivative = (right - left) / (2 * h)
    return ConditionReport.from_kappa(abs(x * derivative / fx))


def kappa_compose(*kappas):
    """Condition number of a composition: the product of the stages' numbers."""
    if any(k < 0 for k in kappas):
        raise UsageError("condition numbers are nonnegative")
    result = 1
    for k in kappas:
        result *= k
    return result


def kappa_log1p(h: float) -> float:
    """``h / ((1 + h) ln(1 + h))``: harmless near 0, singular as ``h -> -1``.

    Computed with ``log1p`` so that small ``h`` does not suffer the
    cancellation in ``1 + h``; the value at ``h = 0`` is the limit 1.
    """
    if h <= -1:
        raise DomainError("kappa_log1p needs h > -1")
    if h == 0:
        return 1.0
    denominator = (1 + h) * math.log1p(h)
    if denominator == 0:
        return math.inf
    return h / denominator


# ---------------------------------------------------------------- catalog


def _catalog(c: float = 1.0, n: int = 2) -> dict[str, tuple[Callable, Callable]]:
    return {
        "ln": (math.log, lambda x: 1 / x),
        "exp": (math.exp, math.exp),
        "x+c": (lambda x: x + c, lambda x: 1.0),
        "x^n": (lambda x: x ** n, lambda x: n * x ** (n - 1)),
        "log1p": (lambda h: math.log(1 + h), lambda h: 1 / (1 + h)),
    }


CATALOG_NAMES = tuple(_catalog())


def catalog_function(name: str, c: float = 1.0, n: int = 2) -> tuple[Callable, Callable]:
    """Built-in ``(f, f')`` pairs: ln, exp, x+c, x^n, and ln(1+h) (log1p)."""
    try:
        return _catalog(c, n)[name]
    except KeyError:
        raise UsageError(f"unknown function {name!r}; choose from {', '.join(CATALOG_NAMES)}") \
            from None


# ---------------------------------------------------------------- probe


class ProbeResult(NamedTuple):
    plateau_half_width: float
    sqrt_eps: float


def bowl(A: Arithmetic, x):
    """The canonical test function ``1 + (x - 1)^2`` evaluated in ``A``."""
    d = A.sub(x, 1)
    return A.add(1, A.mul(d, d))


def min_resolution_probe(f: Callable = bowl, x0: float = 1.0,
                         fmt: FormatSpec | str | Arithmetic | None = None,
                         max_doublings: int = 2000, tolerance: float = 1e-3) -> ProbeResult:
    """Width of the flat region of ``fl(f)`` around its minimum ``x0``.

    ``f(A, x)`` is evaluated in the arithmetic ``A``.  Offsets grow
    geometrically until ``f(x0 + d)`` differs from ``f(x0)`` on either side,
    then bisection locates the first differing offset.  Near a quadratic
    minimum this width is of order ``sqrt(eps)``.
    """
    A = arithmetic(fmt)
    x0 = A.coerce(x0)
    base = f(A, x0)
    sqrt_eps = math.sqrt(float(A.fmt.epsilon))

    def differs(d: float) -> bool:
        return any(f(A, A.coerce(float(x0) + s * d)) != base for s in (1, -1))

    scale = max(abs(float(x0)), 1.0)
    hi = scale * float(A.fmt.epsilon) / 4
    for _ in range(max_doublings):
        if differs(hi):
            break
        hi *= 2
        if hi > scale * 2.0 ** 64:
            break
    else:
        hi = math.inf
    if not math.isfinite(hi) or hi > scale * 2.0 ** 64:
        raise DiagnosticError("no curvature found: f is flat around x0 within the search budget")
    lo = hi / 2
    while hi - lo > tolerance * lo:
        mid = (lo + hi) / 2
        if differs(mid):
            hi = mid
        else:
            lo = mid
    return ProbeResult(hi, sqrt_eps)


__all__ = [
    "CATALOG_NAMES", "ConditionReport", "ProbeResult", "bowl", "catalog_function",
    "kappa_analytic", "kappa_compose", "kappa_log1p", "kappa_numeric",
    "min_resolution_probe",
]
