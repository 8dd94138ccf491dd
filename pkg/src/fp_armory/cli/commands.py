"""Subcommand implementations; each returns a :class:`Report`."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .. import condition, interval, polynomial, stable, stats, stochastic, summation
from ..errors import UsageError
from ..formats import (
    BINARY16,
    BINARY32,
    BINARY64,
    NEAREST_EVEN,
    FormatSpec,
    arithmetic,
    as_format,
    double_round,
    round_rational,
)
from ..oracle import (
    exact_decimal_string,
    exact_sum,
    find_roundtrip_failure,
    parse_decimal,
    sqrt_rational,
)
from .report import Report, Row, decimal, exact_text, measured_row

DISTRIBUTIONS = ("uniform", "normal", "lognormal", "ones")


# ---------------------------------------------------------------- ingestion


class Ingested:
    """Values rounded into a working format, with the count of inexact conversions."""

    def __init__(self, values: list, exact: list, inexact: int, source: str):
        self.values = values
        self.exact = exact
        self.inexact = inexact
        self.source = source


def _round_in(q: Fraction, fmt: FormatSpec):
    A = arithmetic(fmt)
    value, flags = round_rational(q, fmt, NEAREST_EVEN)
    if not value.is_finite:
        raise UsageError(f"input {exact_text(q)} overflows {fmt}")
    return A.coerce(value.value if not value.is_zero else 0), flags.inexact


def parse_literals(texts, fmt: FormatSpec) -> Ingested:
    values, exact, inexact = [], [], 0
    for text in texts:
        q = parse_decimal(text)
        v, lossy = _round_in(q, fmt)
        values.append(v)
        exact.append(q)
        inexact += lossy
    return Ingested(values, exact, inexact, "literals")


def read_input(path: str, fmt: FormatSpec, binary: bool) -> Ingested:
    """Decimal literals one per line (``#`` starts a comment), or raw little-endian binary64."""
    try:
        if binary:
            raw = np.fromfile(path, dtype="<f8")
            values, inexact = [], 0
            for x in raw.tolist():
                if not math.isfinite(x):
                    raise UsageError(f"{path}: non-finite value in binary input")
                v, lossy = _round_in(Fraction(x), fmt)
                values.append(v)
                inexact += lossy
            return Ingested(values, [Fraction(x) for x in raw.tolist()], inexact, path)
        with open(path, encoding="utf-8") as handle:
            lines = [line.split("#", 1)[0].strip() for line in handle]
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    ingested = parse_literals([line for line in lines if line], fmt)
    ingested.source = path
    return ingested


def generate(dist: str, n: int, seed: int, fmt: FormatSpec):
    """``n`` seeded draws from ``dist`` rounded into ``fmt`` (float32 arrays for binary32)."""
    if n < 1:
        raise UsageError("--n must be positive")
    rng = np.random.default_rng(seed)
    if dist == "uniform":
        raw = rng.random(n)
    elif dist == "normal":
        raw = rng.standard_normal(n)
    elif dist == "lognormal":
        raw = rng.lognormal(0.0, 2.0, n)
    elif dist == "ones":
        raw = np.ones(n)
    else:
        raise UsageError(f"unknown distribution {dist!r}; choose from {', '.join(DISTRIBUTIONS)}")
    if fmt == BINARY32:
        return raw.astype(np.float32)
    if fmt == BINARY64:
        return raw
    A = arithmetic(fmt)
    return [A.coerce(float(x)) for x in raw.tolist()]


def _data(args, fmt: FormatSpec, config: dict):
    if args.input:
        ing = read_input(args.input, fmt, args.binary_io)
        config.update(input=ing.source, count=len(ing.values), inexact_conversions=ing.inexact)
        values = ing.values
        if fmt == BINARY32:
            values = np.asarray(values, dtype=np.float32)
        return values
    if args.values:
        ing = parse_literals(args.values, fmt)
        config.update(count=len(ing.values), inexact_conversions=ing.inexact)
        return np.asarray(ing.values, dtype=np.float32) if fmt == BINARY32 else ing.values
    config.update(dist=args.dist, n=args.n, seed=args.seed)
    return generate(args.dist, args.n, args.seed, fmt)


def _scalar(text: str, fmt: FormatSpec, config: dict, name: str):
    q = parse_decimal(text)
    value, lossy = _round_in(q, fmt)
    config[name] = text
    shown = decimal(value, fmt)
    if lossy and shown != text.strip():
        config[f"{name}_rounded"] = shown
    return value


def _base(args, fmt: FormatSpec) -> dict:
    return {"format": str(fmt)}


# ---------------------------------------------------------------- commands


def cmd_sum(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    xs = _data(args, fmt, config)
    rows = [measured_row(r.method, r.result, r.exact, fmt)
            for r in summation.compare_sums(xs, fmt)]
    return Report("sum", config, rows)


def cmd_variance(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    xs = _data(args, fmt, config)
    if isinstance(xs, np.ndarray):
        xs = [float(x) for x in xs]
    if args.offset is not None:
        config["offset"] = args.offset
        shift = parse_decimal(args.offset)
        xs = [_round_in(Fraction(x) + shift, fmt)[0] for x in xs]
    if len(xs) < 2:
        raise UsageError("variance needs at least 2 values")
    values = [Fraction(x) for x in xs]
    mean = sum(values) / len(values)
    exact = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
    A = arithmetic(fmt)
    results = {
        "naive": stats.variance_naive(xs, A),
        "welford": stats.variance_sample(stats.welford(xs, A), A),
        "two_pass": stats.variance_two_pass(xs, A),
    }
    rows = [measured_row(name, value, exact, fmt) for name, value in results.items()]
    return Report("variance", config, rows)


def _require(value, flag: str):
    if value is None:
        raise UsageError(f"{flag} is required")
    return value


def cmd_quadratic(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    a = _scalar(_require(args.a, "--a"), fmt, config, "a")
    b = _scalar(_require(args.b, "--b"), fmt, config, "b")
    c = _scalar(_require(args.c, "--c"), fmt, config, "c")
    if a == 0:
        raise UsageError("--a must be nonzero")
    A = arithmetic(fmt)
    exact = stable.exact_quadratic_roots(a, b, c)
    rows = []
    for name, solver in (("naive", stable.quadratic_naive), ("robust", stable.quadratic_robust)):
        roots = solver(a, b, c, A)
        if exact is None:
            a_, b_, c_ = Fraction(a), Fraction(b), Fraction(c)
            re = -b_ / (2 * a_)
            im = sqrt_rational(4 * a_ * c_ - b_ * b_) / abs(2 * a_)
            if roots.kind == "complex_pair":
                rows.append(measured_row(f"{name} re", roots.roots[0], re, fmt))
                rows.append(measured_row(f"{name} im", roots.roots[1], im, fmt))
            else:
                rows.append(Row(f"{name} {roots.kind}", decimal(roots.roots[0], fmt),
                                f"complex {exact_text(re)} +- {exact_text(im)}i",
                                None, None, {"note": "wrong root kind"}))
            continue
        if roots.kind == "two_real":
            pairs = zip(("x1", "x2"), roots.roots, exact)
        elif roots.kind == "double_real":
            pairs = zip(("x1", "x2"), roots.roots * 2, exact)
        else:
            rows.append(Row(f"{name} complex", decimal(roots.roots[0], fmt),
                            f"{exact_text(exact[0])}, {exact_text(exact[1])}",
                            None, None, {"note": "wrong root kind"}))
            continue
        rows.extend(measured_row(f"{name} {label}", value, q, fmt) for label, value, q in pairs)
    return Report("quadratic", config, rows)


def cmd_triangle(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    sides = [_scalar(_require(getattr(args, k), f"--{k}"), fmt, config, k) for k in "abc"]
    t = stable.TriangleSides.of(*sides)
    exact = stable.exact_area(t)
    A = arithmetic(fmt)
    rows = [measured_row("heron", stable.heron_naive(t, A), exact, fmt),
            measured_row("kahan", stable.area_kahan(t, A), exact, fmt)]
    return Report("triangle", config, rows)


def _complex(text: str, fmt: FormatSpec, config: dict, name: str):
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"--{name} expects RE,IM")
    return (_scalar(parts[0], fmt, config, f"{name}_re"),
            _scalar(parts[1], fmt, config, f"{name}_im"))


def cmd_complex(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    z_re, z_im = _complex(_require(args.z, "--z"), fmt, config, "z")
    A = arithmetic(fmt)
    rows = []
    if args.w is None:
        exact = sqrt_rational(Fraction(z_re) ** 2 + Fraction(z_im) ** 2)
        rows.append(measured_row("abs naive", stable.complex_abs_naive(z_re, z_im, A), exact, fmt))
        rows.append(measured_row("abs robust", stable.complex_abs_robust(z_re, z_im, A),
                                 exact, fmt))
    else:
        w_re, w_im = _complex(args.w, fmt, config, "w")
        a, b, c, d = map(Fraction, (z_re, z_im, w_re, w_im))
        den = c * c + d * d
        if den == 0:
            raise UsageError("division by zero")
        exact = ((a * c + b * d) / den, (b * c - a * d) / den)
        for name, func in (("naive", stable.complex_div_naive),
                           ("robust", stable.complex_div_robust)):
            re, im = func(z_re, z_im, w_re, w_im, A)
            rows.append(measured_row(f"div {name} re", re, exact[0], fmt))
            rows.append(measured_row(f"div {name} im", im, exact[1], fmt))
    return Report("complex", config, rows)


def cmd_polynomial(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    if args.power is not None:
        coefficients = [arithmetic(fmt).coerce(v) for v in polynomial.binomial_power(args.power)]
        config["power"] = args.power
    else:
        texts = [t for t in _require(args.coeffs, "--coeffs or --power").split(",") if t.strip()]
        ing = parse_literals(texts, fmt)
        coefficients = ing.values
        config.update(coeffs=args.coeffs, inexact_conversions=ing.inexact)
    x = _scalar(_require(args.x, "--x"), fmt, config, "x")
    exact = polynomial.eval_exact(coefficients, x)
    A = arithmetic(fmt)
    rows = [measured_row(name, func(coefficients, x, A), exact, fmt)
            for name, func in polynomial.EVALUATORS.items()]
    return Report("polynomial", config, rows)


def _condition_row(name: str, report: condition.ConditionReport, exact) -> Row:
    kappa = float(report.kappa)
    return Row(name, decimal(kappa), exact_text(exact) if exact is not None else "",
               None, None, {"digits_lost_dec": report.digits_lost_dec,
                            "bits_lost": report.bits_lost, "singular": report.singular})


def cmd_condition(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    if args.probe:
        formats = [fmt] if args.spec else [BINARY16, BINARY32, BINARY64]
        config["format"] = ",".join(str(f) for f in formats)
        config["function"] = "1+(x-1)^2"
        rows = []
        for f in formats:
            probe = condition.min_resolution_probe(fmt=f)
            ratio = probe.plateau_half_width / probe.sqrt_eps
            rows.append(Row(str(f), decimal(probe.plateau_half_width), decimal(probe.sqrt_eps),
                            abs(ratio - 1), None, {"ratio_to_sqrt_eps": ratio}))
        return Report("condition", config, rows)
    name = _require(args.function, "--function")
    n = int(args.power) if args.power is not None else 2
    c_text = args.c if args.c is not None else "1"
    f, df = condition.catalog_function(name, float(parse_decimal(c_text)), n)
    x_text = _require(args.x, "--x")
    x = float(parse_decimal(x_text))
    config.update(function=name, x=x_text)
    if name in ("x+c", "x^n"):
        config["c" if name == "x+c" else "n"] = c_text if name == "x+c" else n
    exact = None
    if name == "x+c":
        qx, qc = Fraction(x), parse_decimal(c_text)
        exact = condition.kappa_analytic(lambda t: t + qc, lambda t: 1, qx).kappa
    elif name == "x^n":
        exact = abs(n)
    analytic = condition.kappa_analytic(f, df, x)
    numeric = condition.kappa_numeric(f, x)
    rows = [_condition_row("analytic", analytic, exact),
            _condition_row("numeric", numeric, exact)]
    if name == "log1p":
        rows.append(_condition_row("log1p-form", condition.ConditionReport.from_kappa(
            condition.kappa_log1p(x)), exact))
    return Report("condition", config, rows)


# ---------------------------------------------------------------- stochastic


def _catalog(seed: int) -> dict:
    data = np.random.default_rng(seed).random(1000).tolist()
    shifted = [1e9 + k for k in (1, 2, 3, 4)]
    small = stable.exact_quadratic_roots(1, 1e8, 1)[1]
    mean = sum(map(Fraction, shifted)) / 4
    var = sum((Fraction(v) - mean) ** 2 for v in shifted) / 3
    return {
        "rump": (lambda A: stable.rump_expression(77617.0, 33096.0, A),
                 stable.exact_rump(77617, 33096)),
        "product": (lambda A: A.mul(2.0, 3.0), Fraction(6)),
        "quadratic-naive": (lambda A: stable.quadratic_naive(1.0, 1e8, 1.0, A).roots[1], small),
        "quadratic-robust": (lambda A: stable.quadratic_robust(1.0, 1e8, 1.0, A).roots[1], small),
        "sum-naive": (lambda A: summation.sum_naive(data, A), exact_sum(data)),
        "sum-kahan": (lambda A: summation.sum_kahan(data, A), exact_sum(data)),
        "variance-naive": (lambda A: stats.variance_naive(shifted, A), var),
        "variance-two-pass": (lambda A: stats.variance_two_pass(shifted, A), var),
    }


STOCHASTIC_COMPUTATIONS = tuple(_catalog(0))


def cmd_stochastic(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    name = args.computation
    catalog = _catalog(args.seed)
    if name not in catalog:
        raise UsageError(f"unknown computation {name!r}; choose from "
                         f"{', '.join(STOCHASTIC_COMPUTATIONS)}")
    computation, exact = catalog[name]
    policy = args.policy
    config.update(computation=name, policy=policy, seed=args.seed)
    if policy == "directed":
        results = stochastic.run_directed_suite(computation, fmt)
        rows = [measured_row(mode.value, value, exact, fmt) for mode, value in results.items()]
        config["spread"] = stochastic.directed_spread(results)
        return Report("stochastic", config, rows)
    config["n"] = args.n
    report = stochastic.run_stochastic(computation, n=args.n, seed=args.seed,
                                       policy=policy, fmt=fmt)
    row = measured_row(f"{policy} mean", report.mean, exact, fmt) \
        if math.isfinite(report.mean) else Row(f"{policy} mean", decimal(report.mean),
                                               exact_text(exact))
    row.extra.update(stddev=report.stddev, significant_digits=report.significant_digits,
                     cap=report.cap, flagged=report.flagged)
    return Report("stochastic", config, [row])


# ---------------------------------------------------------------- interval


def _exact_op(op: str, x: Fraction, y: Fraction | None):
    if op == "add":
        return x + y
    if op == "sub":
        return x - y
    if op == "mul":
        return x * y
    if op == "div":
        return x / y if y != 0 else None
    return sqrt_rational(x) if x >= 0 else None


def cmd_interval(args, fmt: FormatSpec) -> Report:
    if fmt != BINARY64:
        raise UsageError("intervals use binary64 endpoints")
    config = _base(args, fmt)
    if args.demo == "demon":
        config.update(demo="demon", iterations=args.n, c=args.c or "1", d="0.1")
        demo = interval.iv_demon_demo(args.n, c=args.c or "1")
        rows = [Row("inexact x*c+d", decimal(demo.widths[-1]), "", None, None,
                    {"first_width": demo.widths[0]}),
                Row("exact x*1, aware", decimal(demo.exact_aware[-1]), "0", None, None,
                    {"first_width": demo.exact_aware[0]}),
                Row("exact x*1, inflated", decimal(demo.exact_inflated[-1]), "0", None, None,
                    {"first_width": demo.exact_inflated[0]})]
        return Report("interval", config, rows)
    if args.demo is not None:
        raise UsageError(f"unknown interval demo {args.demo!r}")
    op = args.op
    x_text = _require(args.x, "--x")
    config.update(op=op, x=x_text)
    x = interval.Interval.from_decimal(x_text)
    qx, qy = parse_decimal(x_text), None
    if op == "sqrt":
        result = interval.iv_sqrt(x)
    else:
        y_text = _require(args.y, "--y")
        config["y"] = y_text
        y = interval.Interval.from_decimal(y_text)
        qy = parse_decimal(y_text)
        func = {"add": interval.iv_add, "sub": interval.iv_sub,
                "mul": interval.iv_mul, "div": interval.iv_div}[op]
        result = func(x, y)
    exact = _exact_op(op, qx, qy)
    row = Row(op, str(result), exact_text(exact) if exact is not None else "",
              None, None, {"lo": result.lo, "hi": result.hi, "width": interval.iv_width(result)})
    if exact is not None:
        row.extra["contains_exact"] = interval.iv_contains(result, exact)
    return Report("interval", config, [row])


# ---------------------------------------------------------------- conversions


def cmd_roundtrip(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    rows = []
    if args.x is not None:
        config["x"] = args.x
        q = parse_decimal(args.x)
        value, flags = round_rational(q, fmt, NEAREST_EVEN)
        rows.append(Row("nearest", decimal(value, fmt), exact_text(q),
                        None, None, {"stored": exact_decimal_string(value),
                                     "inexact": flags.inexact}))
    if args.digits is not None or not rows:
        digits = args.digits if args.digits is not None else \
            math.floor((fmt.precision - 1) * math.log10(fmt.radix))
        config.update(digits=digits, exhaustive=args.exhaustive, seed=args.seed)
        found = find_roundtrip_failure(fmt, digits, exhaustive=args.exhaustive,
                                       budget=args.budget, seed=args.seed)
        extra = {"counterexample": found is not None}
        if found is not None:
            stored = round_rational(parse_decimal(found), fmt, NEAREST_EVEN)[0]
            extra["stored"] = exact_decimal_string(stored)
        rows.append(Row(f"search {digits} digits", found or "none", "", None, None, extra))
    return Report("roundtrip", config, rows)


def cmd_toy(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    demo = args.demo or "diff-squares"
    config["demo"] = demo
    A = arithmetic(fmt)
    if demo == "diff-squares":
        a = _scalar(args.a or "3.34", fmt, config, "a")
        b = _scalar(args.b or "3.33", fmt, config, "b")
        exact = Fraction(a) ** 2 - Fraction(b) ** 2
        rows = [measured_row("naive", stable.diff_squares_naive(a, b, A), exact, fmt),
                measured_row("factored", stable.diff_squares_factored(a, b, A), exact, fmt)]
        return Report("toy", config, rows)
    if demo == "double-rounding":
        text = args.x or "3.47"
        high = as_format(args.high) if args.high else None
        if high is None:
            raise UsageError("--high is required for the double-rounding demo")
        config.update(x=text, high=str(high))
        q = parse_decimal(text)
        outcome = double_round(q, high, fmt)
        rows = [measured_row("chained", outcome.chained.value, q, fmt, differs=outcome.differs),
                measured_row("direct", outcome.direct.value, q, fmt, differs=outcome.differs)]
        return Report("toy", config, rows)
    if demo == "sum-ones":
        config["n"] = args.n
        total = A.fold_add([A.coerce(1)] * args.n)
        return Report("toy", config, [measured_row("naive", total, Fraction(args.n), fmt)])
    raise UsageError(f"unknown toy demo {demo!r}")


def cmd_rump(args, fmt: FormatSpec) -> Report:
    config = _base(args, fmt)
    a = _scalar(args.a or "77617", fmt, config, "a")
    b = _scalar(args.b or "33096", fmt, config, "b")
    exact = stable.exact_rump(a, b)
    A = arithmetic(fmt)
    return Report("rump", config, [measured_row("naive", stable.rump_expression(a, b, A),
                                                exact, fmt)])


COMMANDS = {
    "sum": cmd_sum,
    "quadratic": cmd_quadratic,
    "variance": cmd_variance,
    "triangle": cmd_triangle,
    "complex": cmd_complex,
    "polynomial": cmd_polynomial,
    "condition": cmd_condition,
    "stochastic": cmd_stochastic,
    "interval": cmd_interval,
    "roundtrip": cmd_roundtrip,
    "toy": cmd_toy,
    "rump": cmd_rump,
}

DEFAULT_FORMATS = {"sum": BINARY32, "toy": "toy:10,3"}
