import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fp_armory.errors import DomainError, UsageError, ZeroDivisorError
from fp_armory.interval import (
    Interval,
    iv_add,
    iv_contains,
    iv_demon_demo,
    iv_div,
    iv_midpoint,
    iv_mul,
    iv_sqrt,
    iv_sub,
    iv_subset,
    iv_width,
)

I = Interval
endpoint = st.floats(min_value=-1e100, max_value=1e100, allow_nan=False)


@st.composite
def intervals(draw):
    a, b = draw(endpoint), draw(endpoint)
    return I(min(a, b), max(a, b))


@st.composite
def member(draw, iv):
    t = draw(st.fractions(min_value=0, max_value=1, max_denominator=1000))
    return Fraction(iv.lo) + t * (Fraction(iv.hi) - Fraction(iv.lo))


@given(st.data())
def test_containment(data):
    a, b = data.draw(intervals()), data.draw(intervals())
    x, y = data.draw(member(a)), data.draw(member(b))
    assert iv_contains(iv_add(a, b), x + y)
    assert iv_contains(iv_sub(a, b), x - y)
    assert iv_contains(iv_mul(a, b), x * y)
    if not b.lo <= 0 <= b.hi:
        assert iv_contains(iv_div(a, b), x / y)
    if a.lo >= 0:
        r = iv_sqrt(a)
        assert Fraction(r.lo) ** 2 <= x <= Fraction(r.hi) ** 2


@given(endpoint, endpoint)
def test_exact_point_operations_have_zero_width(x, y):
    from fp_armory.eft import two_sum
    if two_sum(x, y).lo == 0:
        assert iv_width(iv_add(I.point(x), I.point(y))) == 0


def test_tightness():
    assert iv_add(I(2, 2), I(3, 3)) == I(5, 5)
    assert iv_mul(I(-1, 2), I(3, 4)) == I(-4, 8)
    assert iv_div(I(6, 6), I(2, 2)) == I(3, 3)
    assert iv_sqrt(I(4, 9)) == I(2, 3)
    third = iv_div(I(1, 1), I(3, 3))
    assert third.lo == 1 / 3 and third.hi == math.nextafter(third.lo, 1)
    root = iv_sqrt(I(2, 2))
    assert root.hi == math.sqrt(2) and root.lo == math.nextafter(root.hi, 0)


def test_from_decimal():
    tenth = I.from_decimal("0.1")
    assert Fraction(1, 10) in tenth and tenth.hi == math.nextafter(tenth.lo, 1)
    assert I.from_decimal("0.5") == I(0.5, 0.5)


def test_infinite_endpoints():
    assert iv_mul(I(0, 0), I.whole()) == I(0, 0)
    assert iv_div(I(1, 2), I(1, math.inf)) == I(0, 2)
    assert iv_div(I(1, math.inf), I(1, math.inf)) == I(0, math.inf)
    with pytest.warns(RuntimeWarning):
        assert iv_add(I(-math.inf, 0), I(math.inf, math.inf)) == I.whole()


def test_errors():
    with pytest.raises(ZeroDivisorError):
        iv_div(I(1, 1), I(-1, 1))
    assert iv_div(I(1, 1), I(-1, 1), allow_whole_line=True) == I.whole()
    with pytest.raises(DomainError):
        iv_sqrt(I(-1, 1))
    with pytest.raises(UsageError):
        I(2, 1)
    with pytest.raises(UsageError):
        I(math.nan, 1)


def test_helpers():
    assert iv_midpoint(I(1, 3)) == 2
    assert iv_midpoint(I.whole()) == 0
    assert iv_subset(I(1, 2), I(0, 3)) and not iv_subset(I(0, 3), I(1, 2))
    assert str(I(0.1, 0.30000000000000004)) == \
        "[0.1, 0.30000000000000004] (width 0.20000000000000004)"


def test_blind_inflation_grows_where_awareness_stays_tight():
    demo = iv_demon_demo(200)
    assert all(w == 0 for w in demo.exact_aware)
    assert demo.exact_inflated[-1] > demo.exact_inflated[0] > 0
    assert list(demo.exact_inflated) == sorted(demo.exact_inflated)
    assert demo.widths[-1] > demo.widths[0]
    with pytest.raises(UsageError):
        iv_demon_demo(0)
