import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fp_armory import condition as C
from fp_armory.errors import DiagnosticError, DomainError, UsageError
from fp_armory.formats import BINARY16, BINARY32, BINARY64


def test_shift_near_cancellation_is_exact_rational():
    x = Fraction("-0.999")
    report = C.kappa_analytic(lambda t: t + 1, lambda t: 1, x)
    assert report.kappa == 999
    assert report.digits_lost_dec == pytest.approx(math.log10(999))
    assert report.bits_lost == pytest.approx(math.log2(999))


def test_singular_at_zero_of_f():
    report = C.kappa_analytic(lambda t: t - 1, lambda t: 1, 1.0)
    assert report.singular and report.kappa == math.inf


def test_catalog_values():
    f, df = C.catalog_function("ln")
    assert C.kappa_analytic(f, df, math.e).kappa == pytest.approx(1.0)
    f, df = C.catalog_function("exp")
    assert C.kappa_analytic(f, df, 3.0).kappa == pytest.approx(3.0)
    f, df = C.catalog_function("x^n", n=5)
    assert C.kappa_analytic(f, df, 7.0).kappa == pytest.approx(5.0)
    with pytest.raises(UsageError):
        C.catalog_function("sin")


@given(st.floats(min_value=0.01, max_value=100))
def test_numeric_agrees_with_analytic(x):
    for name in ("ln", "exp", "x^n"):
        f, df = C.catalog_function(name)
        if name == "ln" and abs(x - 1) < 0.05:
            continue
        analytic = C.kappa_analytic(f, df, x).kappa
        numeric = C.kappa_numeric(f, x).kappa
        assert numeric == pytest.approx(analytic, rel=1e-5)


def test_numeric_singular():
    assert C.kappa_numeric(math.log, 1.0).singular
    assert C.kappa_numeric(math.log, -1.0).singular


def test_compose():
    assert C.kappa_compose(2, 3, Fraction(1, 2)) == 3
    with pytest.raises(UsageError):
        C.kappa_compose(-1)


def test_log1p_form():
    h = math.e - 1
    assert C.kappa_log1p(h) == pytest.approx(h / math.e)
    assert C.kappa_log1p(0.0) == 1.0
    assert C.kappa_log1p(1e-12) == pytest.approx(1.0)
    assert C.kappa_log1p(-1 + 1e-9) > 1e7
    with pytest.raises(DomainError):
        C.kappa_log1p(-1.0)


@pytest.mark.parametrize("fmt", [BINARY16, BINARY32, BINARY64])
def test_probe_scales_with_sqrt_eps(fmt):
    probe = C.min_resolution_probe(fmt=fmt)
    assert probe.sqrt_eps / 10 <= probe.plateau_half_width <= probe.sqrt_eps * 10


def test_probe_on_flat_function():
    with pytest.raises(DiagnosticError):
        C.min_resolution_probe(lambda A, x: 1.0)


def test_probe_shifted_minimum():
    probe = C.min_resolution_probe(lambda A, x: A.add(5, A.mul(A.sub(x, 3), A.sub(x, 3))),
                                   x0=3.0)
    assert 0.1 < probe.plateau_half_width / (3 * probe.sqrt_eps) < 10


def test_report_zero_kappa():
    report = C.ConditionReport.from_kappa(0)
    assert report.digits_lost_dec == -math.inf and not report.singular


@given(st.floats(min_value=1e-3, max_value=1e3), st.integers(min_value=-4, max_value=6))
def test_power_law_condition_is_constant(x, n):
    if n == 0:
        return
    f, df = C.catalog_function("x^n", n=n)
    assert C.kappa_analytic(f, df, x).kappa == pytest.approx(abs(n))
