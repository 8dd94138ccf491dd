"""Stable closed forms next to their naive counterparts.

Each function accepts an optional working format (name, FormatSpec or
Arithmetic context, default binary64).  Operands enter exactly and each
operation rounds once, so the same code shows the failure modes in a toy
decimal format, in binary32 or in binary64.

The parenthesizations below are load-bearing.  Re-associating them, as a
fast-math style optimizer would, destroys the stability; the needle-triangle
canary test detects that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import DomainError, NonTriangleError, UsageError
from .formats import NEAREST_EVEN, Arithmetic, FormatSpec, arithmetic
from .oracle import sqrt_rational

_ORACLE_BITS = 320


# ---------------------------------------------------------------- squares


def diff_squares_naive(a, b, fmt: FormatSpec | str | Arithmetic | None = None):
    """``fl(fl(a*a) - fl(b*b))``."""
    A = arithmetic(fmt)
    return A.sub(A.mul(a, a), A.mul(b, b))


def diff_squares_factored(a, b, fmt: FormatSpec | str | Arithmetic | None = None):
    """``fl(fl(a-b) * fl(a+b))``; exact inputs of like magnitude lose nothing in ``a-b``."""
    A = arithmetic(fmt)
    return A.mul(A.sub(a, b), A.add(a, b))


# ---------------------------------------------------------------- quadratic


@dataclass(frozen=True)
class QuadraticRoots:
    """Roots of ``a x^2 + b x + c``.

    ``kind`` is ``"two_real"`` (``roots = (x1, x2)``, ``x1 <= x2``),
    ``"double_real"`` (``roots = (x,)``) or ``"complex_pair"``
    (``roots = (re, im)`` with ``im > 0``; the conjugate is implied).
    """

    kind: str
    roots: tuple
    discriminant_used: object

    @property
    def small(self):
        """The real root of smaller magnitude (two_real only)."""
        if self.kind != "two_real":
            raise UsageError(f"{self.kind} roots have no small real root")
        return min(self.roots, key=abs)

    @property
    def large(self):
        if self.kind != "two_real":
            raise UsageError(f"{self.kind} roots have no large real root")
        return max(self.roots, key=abs)


def _check_quadratic(a) -> None:
    if a == 0:
        raise UsageError("a = 0: the equation is linear, not quadratic")


def discriminant_naive(a, b, c, fmt: FormatSpec | str | Arithmetic | None = None):
    A = arithmetic(fmt)
    return A.sub(A.mul(b, b), A.mul(A.mul(4, a), c))


def discriminant_eft(a, b, c, fmt: FormatSpec | str | Arithmetic | None = None):
    """``b*b - 4*a*c`` from two exact products: ``fl((p1 - p2) + (e1 - e2))``.

    In a binary format ``4*a`` is exact, so when the two products cancel the
    result carries the exact low-order residue instead of rounding noise.
    """
    return _discriminant_pair(arithmetic(fmt), a, b, c)[0]


def _discriminant_pair(A: Arithmetic, a, b, c):
    """The discriminant as an unevaluated sum ``hi + lo``."""
    p1 = A.mul(b, b)
    e1 = A.fma(b, b, -p1)
    four_a = A.mul(4, a)
    p2 = A.mul(four_a, c)
    e2 = A.fma(four_a, c, -p2)
    hi, err = _two_sum(A, p1, -p2)
    return _two_sum(A, hi, A.add(err, A.sub(e1, e2)))


def _complex_roots(A: Arithmetic, a, b, delta) -> QuadraticRoots:
    two_a = A.mul(2, a)
    re = A.div(-b, two_a)
    im = A.div(A.sqrt(-delta), abs(two_a))
    return QuadraticRoots("complex_pair", (re, im), delta)


def quadratic_naive(a, b, c, fmt: FormatSpec | str | Arithmetic | None = None) -> QuadraticRoots:
    """Textbook ``(-b +- sqrt(b^2 - 4ac)) / 2a``."""
    _check_quadratic(a)
    A = arithmetic(fmt)
    delta = discriminant_naive(a, b, c, A)
    if delta < 0:
        return _complex_roots(A, a, b, delta)
    two_a = A.mul(2, a)
    if delta == 0:
        return QuadraticRoots("double_real", (A.div(-b, two_a),), delta)
    s = A.sqrt(delta)
    x_plus = A.div(A.add(-b, s), two_a)
    x_minus = A.div(A.sub(-b, s), two_a)
    return QuadraticRoots("two_real", tuple(sorted((x_plus, x_minus))), delta)


def quadratic_robust(a, b, c, fmt: FormatSpec | str | Arithmetic | None = None) -> QuadraticRoots:
    """Cancellation-free roots.

    ``q = -sgn(b) * (|b| + sqrt(delta)) / 2`` adds two like-signed terms;
    ``x1 = q / a`` and ``x2 = c / q``.  ``sgn(0)`` is taken as +1.  The
    discriminant comes from :func:`discriminant_eft`.  In binary formats the
    sum inside ``q`` is kept as an exact two-term value and both quotients
    are compensated.  Real roots are returned in increasing order.
    """
    _check_quadratic(a)
    A = arithmetic(fmt)
    delta, delta_lo = _discriminant_pair(A, a, b, c)
    if delta < 0:
        return _complex_roots(A, a, b, delta)
    if delta == 0:
        return QuadraticRoots("double_real", (A.div(-b, A.mul(2, a)),), delta)
    s = A.sqrt(delta)
    if A.fmt.radix != 2 or A.mode is not NEAREST_EVEN:
        half = A.div(A.add(abs(b), s), 2)
        q = -half if b >= 0 else half
        return QuadraticRoots("two_real", tuple(sorted((A.div(q, a), A.div(c, q)))), delta)
    # A Newton step recovers the square root's low part from the
    # discriminant's; |b| + sqrt(delta) is then kept as a pair and folded
    # into compensated quotients, leaving one final rounding per root.
    s_lo = A.div(A.add(A.fma(-s, s, delta), delta_lo), A.mul(2, s))
    sign = -1 if b >= 0 else 1
    hi, lo = _two_sum(A, abs(b), s)
    lo = A.add(lo, s_lo)
    q_hi, q_lo = A.div(sign * hi, 2), A.div(sign * lo, 2)
    x1 = A.div(q_hi, a)
    x1 = A.add(x1, A.div(A.add(A.fma(-x1, a, q_hi), q_lo), a))
    x2 = A.div(c, q_hi)
    x2 = A.add(x2, A.div(A.sub(A.fma(-x2, q_hi, c), A.mul(x2, q_lo)), q_hi))
    return QuadraticRoots("two_real", tuple(sorted((x1, x2))), delta)


def exact_quadratic_roots(a, b, c, bits: int = _ORACLE_BITS) -> tuple[Fraction, Fraction] | None:
    """Real roots of the exact coefficients to about ``bits`` bits, or None if complex.

    Uses the cancellation-free formula in rational arithmetic, so the only
    approximation is the truncated square root.
    """
    a, b, c = Fraction(a), Fraction(b), Fraction(c)
    _check_quadratic(a)
    delta = b * b - 4 * a * c
    if delta < 0:
        return None
    s = sqrt_rational(delta, bits)
    q = -(abs(b) + s) / 2 if b >= 0 else (abs(b) + s) / 2
    if q == 0:
        return (Fraction(0), Fraction(0))
    return tuple(sorted((q / a, c / q)))


# ---------------------------------------------------------------- triangles


@dataclass(frozen=True)
class TriangleSides:
    """Side lengths relabelled so that ``a >= b >= c > 0``."""

    a: object
    b: object
    c: object

    @classmethod
    def of(cls, x, y, z) -> TriangleSides:
        if not all(v > 0 for v in (x, y, z)):
            raise DomainError("triangle sides must be positive")
        a, b, c = sorted((x, y, z), reverse=True)
        if Fraction(c) - (Fraction(a) - Fraction(b)) < 0:
            raise NonTriangleError(f"({x}, {y}, {z}) violates the triangle inequality")
        return cls(a, b, c)


def _sides(sides) -> TriangleSides:
    return sides if isinstance(sides, TriangleSides) else TriangleSides.of(*sides)


def heron_naive(sides, fmt: FormatSpec | str | Arithmetic | None = None):
    """``sqrt(p (p-a) (p-b) (p-c))`` with the semi-perimeter ``p``."""
    t = _sides(sides)
    A = arithmetic(fmt)
    p = A.div(A.add(A.add(t.a, t.b), t.c), 2)
    product = A.mul(A.mul(A.mul(p, A.sub(p, t.a)), A.sub(p, t.b)), A.sub(p, t.c))
    return A.sqrt(product)


def area_kahan(sides, fmt: FormatSpec | str | Arithmetic | None = None):
    """``sqrt((a+(b+c)) (c-(a-b)) (c+(a-b)) (a+(b-c))) / 4`` with ``a >= b >= c``."""
    t = _sides(sides)
    A = arithmetic(fmt)
    a, b, c = t.a, t.b, t.c
    f1 = A.add(a, A.add(b, c))
    f2 = A.sub(c, A.sub(a, b))
    f3 = A.add(c, A.sub(a, b))
    f4 = A.add(a, A.sub(b, c))
    return A.div(A.sqrt(A.mul(A.mul(A.mul(f1, f2), f3), f4)), 4)


def exact_area(sides, bits: int = _ORACLE_BITS) -> Fraction:
    """Triangle area from the exact 16*S^2 product, square root to ``bits`` bits."""
    t = _sides(sides)
    a, b, c = Fraction(t.a), Fraction(t.b), Fraction(t.c)
    sixteen_s2 = (a + b + c) * (-a + b + c) * (a - b + c) * (a + b - c)
    return sqrt_rational(sixteen_s2, bits) / 4


# ---------------------------------------------------------------- complex


def complex_abs_naive(re, im, fmt: FormatSpec | str | Arithmetic | None = None):
    A = arithmetic(fmt)
    return A.sqrt(A.add(A.mul(re, re), A.mul(im, im)))


def complex_abs_robust(re, im, fmt: FormatSpec | str | Arithmetic | None = None):
    """``m * sqrt(1 + (n/m)^2)`` with ``m = max(|re|, |im|)``: no intermediate overflow."""
    A = arithmetic(fmt)
    x, y = abs(re), abs(im)
    if _is_inf(x) or _is_inf(y):
        return math.inf
    if x != x or y != y:
        return math.nan
    m, n = (x, y) if x >= y else (y, x)
    if m == 0:
        return m
    r = A.div(n, m)
    return A.mul(m, A.sqrt(A.fma(r, r, 1)))


def complex_div_naive(a_re, a_im, b_re, b_im,
                      fmt: FormatSpec | str | Arithmetic | None = None):
    A = arithmetic(fmt)
    den = A.add(A.mul(b_re, b_re), A.mul(b_im, b_im))
    re = A.add(A.mul(a_re, b_re), A.mul(a_im, b_im))
    im = A.sub(A.mul(a_im, b_re), A.mul(a_re, b_im))
    return A.div(re, den), A.div(im, den)


def complex_div_robust(a_re, a_im, b_re, b_im,
                       fmt: FormatSpec | str | Arithmetic | None = None):
    """Scaled complex quotient with no intermediate overflow.

    Binary round-to-nearest contexts scale both operands by powers of two
    (exact) and form numerators and denominator as exact two-term sums of
    products; other contexts use Smith's ratio formulation.
    """
    A = arithmetic(fmt)
    if b_re == 0 and b_im == 0:
        if (a_re == 0 and a_im == 0) or a_re != a_re or a_im != a_im:
            return math.nan, math.nan
        return (A.div(a_re, 0.0) if a_re else math.nan,
                A.div(a_im, 0.0) if a_im else math.nan)
    values = (a_re, a_im, b_re, b_im)
    if (A.fmt.radix == 2 and A.mode is NEAREST_EVEN
            and all(isinstance(v, float) and math.isfinite(v) for v in values)):
        return _div_scaled(A, *values)
    return _div_smith(A, *values)


def _div_smith(A: Arithmetic, a_re, a_im, b_re, b_im):
    if abs(b_re) >= abs(b_im):
        r = A.div(b_im, b_re)
        den = A.fma(b_im, r, b_re)
        return (A.div(A.fma(a_im, r, a_re), den),
                A.div(A.fma(-a_re, r, a_im), den))
    r = A.div(b_re, b_im)
    den = A.fma(b_re, r, b_im)
    return (A.div(A.fma(a_re, r, a_im), den),
            A.div(A.fma(a_im, r, -a_re), den))


def _two_sum(A: Arithmetic, x, y):
    s = A.add(x, y)
    bb = A.sub(s, x)
    return s, A.add(A.sub(x, A.sub(s, bb)), A.sub(y, bb))


def _dot2(A: Arithmetic, x1, y1, x2, y2):
    """``x1*y1 + x2*y2`` as an unevaluated pair (hi, lo)."""
    p1 = A.mul(x1, y1)
    p2 = A.mul(x2, y2)
    hi, lo = _two_sum(A, p1, p2)
    lo = A.add(lo, A.add(A.fma(x1, y1, -p1), A.fma(x2, y2, -p2)))
    return _two_sum(A, hi, lo)


def _div_pair(A: Arithmetic, nh, nl, dh, dl):
    q = A.div(nh, dh)
    r = A.sub(A.add(A.fma(-q, dh, nh), nl), A.mul(q, dl))
    return A.add(q, A.div(r, dh))


def _scaled_dot(A: Arithmetic, *terms):
    """``sum(u*v)`` over two ``(u, v)`` terms as ``(hi, lo, k)`` meaning ``(hi + lo) * 2**k``.

    Products are formed from frexp mantissas and aligned to the largest, so
    a term is only lost when it is negligible next to the other.
    """
    parts = []
    for u, v in terms:
        if u and v:
            mu, eu = math.frexp(u)
            mv, ev = math.frexp(v)
            parts.append((mu, mv, eu + ev))
    if not parts:
        return 0.0, 0.0, 0
    k = max(e for _, _, e in parts)
    scaled = [(mu, math.ldexp(mv, e - k)) for mu, mv, e in parts] + [(0.0, 0.0)]
    return (*_dot2(A, *scaled[0], *scaled[1]), k)


def _div_scaled(A: Arithmetic, a_re, a_im, b_re, b_im):
    dh, dl, kd = _scaled_dot(A, (b_re, b_re), (b_im, b_im))
    nh, nl, kr = _scaled_dot(A, (a_re, b_re), (a_im, b_im))
    re = _div_pair(A, nh, nl, dh, dl)
    nh, nl, ki = _scaled_dot(A, (a_im, b_re), (-a_re, b_im))
    im = _div_pair(A, nh, nl, dh, dl)
    return A.coerce(_ldexp(re, kr - kd)), A.coerce(_ldexp(im, ki - kd))


def _ldexp(x: float, k: int) -> float:
    try:
        return math.ldexp(x, k)
    except OverflowError:
        return math.copysign(math.inf, x)


def _is_inf(v) -> bool:
    return isinstance(v, float) and math.isinf(v)


# ---------------------------------------------------------------- Rump


def _rump_check(a, b) -> None:
    if b == 0:
        raise UsageError("b = 0: the term a/(2b) is undefined")


def rump_expression(a, b, fmt: FormatSpec | str | Arithmetic | None = None):
    """``333.75 b^6 + a^2 (11 a^2 b^2 - b^6 - 121 b^4 - 2) + 5.5 b^8 + a/(2b)``, naively."""
    _rump_check(a, b)
    A = arithmetic(fmt)
    mul, add, sub = A.mul, A.add, A.sub
    a2 = mul(a, a)
    b2 = mul(b, b)
    b4 = mul(b2, b2)
    b6 = mul(b4, b2)
    b8 = mul(b4, b4)
    inner = sub(sub(sub(mul(mul(11, a2), b2), b6), mul(121, b4)), 2)
    total = add(mul(333.75, b6), mul(a2, inner))
    total = add(total, mul(5.5, b8))
    return add(total, A.div(a, mul(2, b)))


def exact_rump(a, b) -> Fraction:
    _rump_check(a, b)
    a, b = Fraction(a), Fraction(b)
    return (Fraction(1335, 4) * b ** 6 + a ** 2 * (11 * a ** 2 * b ** 2 - b ** 6 - 121 * b ** 4 - 2)
            + Fraction(11, 2) * b ** 8 + a / (2 * b))


__all__ = [
    "QuadraticRoots", "TriangleSides", "area_kahan", "complex_abs_naive",
    "complex_abs_robust", "complex_div_naive", "complex_div_robust",
    "diff_squares_factored", "diff_squares_naive", "discriminant_eft",
    "discriminant_naive", "exact_area", "exact_quadratic_roots", "exact_rump",
    "heron_naive", "quadratic_naive", "quadratic_robust", "rump_expression",
]
