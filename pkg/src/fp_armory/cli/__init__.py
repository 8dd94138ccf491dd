"""Command-line diagnostics: naive versus robust evaluations against exact results.

Exit status is 0 on success, 2 on usage errors (bad flags, malformed
numbers, unknown formats) and 1 when a computation refuses its input (for
example side lengths that do not form a triangle).
"""

from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from ..errors import ArmoryError, UsageError
from ..formats import as_format
from ..stochastic import RANDOM
from .commands import COMMANDS, DEFAULT_FORMATS, DISTRIBUTIONS, STOCHASTIC_COMPUTATIONS
from .report import SCHEMA_VERSION, Report

__all__ = ["SCHEMA_VERSION", "build_parser", "main", "run"]

SEED_ENV = "FP_ARMORY_SEED"

_HELP = {
    "sum": "compare summation methods on seeded or supplied data",
    "quadratic": "roots of a x^2 + b x + c, naive and robust",
    "variance": "naive, Welford and two-pass sample variance",
    "triangle": "Heron versus Kahan triangle area",
    "complex": "complex modulus (--z) or quotient (--z, --w)",
    "polynomial": "naive, Horner, fused and compensated Horner",
    "condition": "condition numbers of catalog functions, or the flat-minimum probe",
    "stochastic": "random or directed rounding of a catalog computation",
    "interval": "one outward-rounded interval operation, or the width-growth demo",
    "roundtrip": "shortest decimals and search for decimal round-trip failures",
    "toy": "small-format demos (cancellation, double rounding, saturation)",
    "rump": "Rump's polynomial evaluated naively",
}


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_help(sys.stderr)
        self.exit(2, f"{self.prog}: error: {message}\n")


def _default_seed() -> int:
    text = os.environ.get(SEED_ENV)
    if text is None or text.strip() == "":
        return 0
    try:
        seed = int(text)
    except ValueError:
        raise UsageError(f"{SEED_ENV}={text!r} is not an integer") from None
    if seed < 0:
        raise UsageError(f"{SEED_ENV} must be nonnegative")
    return seed


def _nonnegative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return value


def build_parser(default_seed: int = 0) -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("table", "csv", "json"), default="table",
                        help="report style (default: table)")
    common.add_argument("--spec", help="working float format: binary16|binary32|binary64 "
                        "or toy:<radix>,<p>[,<emin>,<emax>][,nosub]")
    common.add_argument("--seed", type=_nonnegative, default=default_seed,
                        help=f"random seed (default: ${SEED_ENV} or 0)")
    common.add_argument("--input", metavar="FILE",
                        help="data file: decimal literals, one per line, '#' comments")
    common.add_argument("--binary-io", action="store_true",
                        help="--input and --output are raw little-endian binary64 arrays")
    common.add_argument("--output", metavar="FILE",
                        help="write the report here (with --binary-io: the result column)")

    parser = _Parser(prog="fp-armory", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True
    p = {name: sub.add_parser(name, parents=[common], help=_HELP[name],
                              description=_HELP[name]) for name in COMMANDS}

    for name in ("sum", "variance"):
        p[name].add_argument("values", nargs="*", help="decimal literals (instead of --n/--dist)")
        p[name].add_argument("--n", type=int, default=1000, help="generated sample size")
        p[name].add_argument("--dist", choices=DISTRIBUTIONS, default="uniform")
    p["variance"].add_argument("--offset", help="decimal constant added to every value")

    for name in ("quadratic", "triangle", "rump", "toy"):
        for k in "abc" if name in ("quadratic", "triangle") else "ab":
            p[name].add_argument(f"--{k}", help="decimal literal")

    p["complex"].add_argument("--z", help="RE,IM of the operand")
    p["complex"].add_argument("--w", help="RE,IM of the divisor; omit for the modulus")

    p["polynomial"].add_argument("--coeffs", help="comma-separated, ascending degree")
    p["polynomial"].add_argument("--power", type=int, help="use (x-1)^K")
    p["polynomial"].add_argument("--x", help="evaluation point")

    p["condition"].add_argument("--function", help="ln, exp, x+c, x^n or log1p")
    p["condition"].add_argument("--x", help="evaluation point")
    p["condition"].add_argument("--c", help="constant for x+c")
    p["condition"].add_argument("--power", type=int, help="exponent for x^n")
    p["condition"].add_argument("--probe", action="store_true",
                                help="flat-region width of 1+(x-1)^2 around 1")

    p["stochastic"].add_argument("--computation", choices=STOCHASTIC_COMPUTATIONS,
                                 default="rump")
    p["stochastic"].add_argument("--n", type=int, default=16, help="number of samples")
    p["stochastic"].add_argument("--policy", default=RANDOM,
                                 help="random, directed, or one rounding mode name")

    p["interval"].add_argument("--op", choices=("add", "sub", "mul", "div", "sqrt"),
                               default="add")
    p["interval"].add_argument("--x", help="decimal literal")
    p["interval"].add_argument("--y", help="decimal literal")
    p["interval"].add_argument("--demo", help="'demon': width growth over iterations")
    p["interval"].add_argument("--n", type=int, default=100, help="demo iterations")
    p["interval"].add_argument("--c", help="demo multiplier (default 1)")

    p["roundtrip"].add_argument("--x", help="decimal literal to store and print back")
    p["roundtrip"].add_argument("--digits", type=int, help="search for a failing literal")
    p["roundtrip"].add_argument("--budget", type=int, default=20000,
                                help="random literals tried after the neighbourhood scan")
    p["roundtrip"].add_argument("--exhaustive", action="store_true",
                                help="sweep every literal (at most 8 digits)")

    p["toy"].add_argument("--demo", choices=("diff-squares", "double-rounding", "sum-ones"))
    p["toy"].add_argument("--x", help="value for double-rounding")
    p["toy"].add_argument("--high", help="intermediate format for double-rounding")
    p["toy"].add_argument("--n", type=int, default=10000, help="count for sum-ones")
    return parser


def run(argv: list[str] | None = None) -> tuple[Report, argparse.Namespace]:
    """Parse ``argv`` and build the report, raising library errors."""
    parser = build_parser(_default_seed())
    args = parser.parse_args(argv)
    fmt = as_format(args.spec if args.spec else DEFAULT_FORMATS.get(args.command))
    if getattr(args, "n", 1) is not None and getattr(args, "n", 1) < 1:
        raise UsageError("--n must be positive")
    return COMMANDS[args.command](args, fmt), args


def _write(report: Report, args) -> None:
    if args.output and args.binary_io:
        values = [row.value for row in report.sorted_rows() if row.value is not None]
        np.asarray(values, dtype="<f8").tofile(args.output)
        return
    text = report.render(args.format)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as handle:
            handle.write(text)
    else:
        sys.stdout.write(text)


def main(argv: list[str] | None = None) -> int:
    try:
        report, args = run(argv)
        _write(report, args)
    except UsageError as exc:
        print(f"fp-armory: error: {exc}", file=sys.stderr)
        return 2
    except ArmoryError as exc:
        print(f"fp-armory: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:
        return int(exc.code or 0)
    except OSError as exc:
        print(f"fp-armory: error: {exc}", file=sys.stderr)
        return 2
    return 0
