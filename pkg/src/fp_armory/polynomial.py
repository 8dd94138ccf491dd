"""Polynomial evaluation: powers, Horner, fused Horner, compensated Horner.

Coefficients are in ascending degree order, ``p = [a0, a1, ..., an]``.
"""

from __future__ import annotations

from collections.abc import Sequence
from fractions import Fraction

from .errors import UsageError
from .formats import Arithmetic, FormatSpec, arithmetic

Fmt = FormatSpec | str | Arithmetic | None


def _check(p: Sequence) -> None:
    if len(p) == 0:
        raise UsageError("a polynomial needs at least one coefficient")


def eval_naive(p: Sequence, x, fmt: Fmt = None):
    """Sum of ``a_i * x**i`` with each power built by repeated multiplication."""
    _check(p)
    A = arithmetic(fmt)
    total = p[0]
    power = 1.0
    for a in p[1:]:
        power = A.mul(power, x)
        total = A.add(total, A.mul(a, power))
    return total


def eval_horner(p: Sequence, x, fmt: Fmt = None):
    """``a0 + x (a1 + x (...))``: n multiplications and n additions."""
    _check(p)
    A = arithmetic(fmt)
    acc = p[-1]
    for a in reversed(p[:-1]):
        acc = A.add(A.mul(acc, x), a)
    return acc


def eval_horner_fma(p: Sequence, x, fmt: Fmt = None):
    """Horner with one fused multiply-add (one rounding) per step."""
    _check(p)
    A = arithmetic(fmt)
    acc = p[-1]
    for a in reversed(p[:-1]):
        acc = A.fma(acc, x, a)
    return acc


def eval_horner_compensated(p: Sequence, x, fmt: Fmt = None):
    """Horner plus the Horner evaluation of its own rounding errors.

    Each step splits ``acc*x`` with an exact product and ``+ a`` with an
    exact sum; the two residual streams are accumulated Horner-style and
    added back at the end.  The result is about as accurate as plain Horner
    in twice the working precision.
    """
    _check(p)
    A = arithmetic(fmt)
    acc = p[-1]
    err = 0.0
    for a in reversed(p[:-1]):
        prod = A.mul(acc, x)
        pi = A.fma(acc, x, -prod)
        s = A.add(prod, a)
        bb = A.sub(s, prod)
        sigma = A.add(A.sub(prod, A.sub(s, bb)), A.sub(a, bb))
        err = A.add(A.mul(err, x), A.add(pi, sigma))
        acc = s
    return A.add(acc, err)


def eval_exact(p: Sequence, x) -> Fraction:
    """Exact rational value of the polynomial at ``x``."""
    _check(p)
    x = Fraction(x)
    acc = Fraction(p[-1])
    for a in reversed(p[:-1]):
        acc = acc * x + Fraction(a)
    return acc


def binomial_power(k: int, shift=1) -> list:
    """Ascending coefficients of ``(x - shift)**k`` (exact integers for integer shift)."""
    from math import comb
    return [float(comb(k, i) * (-shift) ** (k - i)) for i in range(k + 1)]


EVALUATORS = {
    "naive": eval_naive,
    "horner": eval_horner,
    "horner_fma": eval_horner_fma,
    "compensated": eval_horner_compensated,
}

__all__ = [
    "EVALUATORS", "binomial_power", "eval_exact", "eval_horner",
    "eval_horner_compensated", "eval_horner_fma", "eval_naive",
]
