"""Report assembly and rendering (table, csv, json)."""

from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction

from ..formats import BINARY64, FormatSpec
from ..oracle import correct_digits, error_ulps, relative_error, round_to_digits, \
    shortest_roundtrip_decimal

SCHEMA_VERSION = 1
EXACT_DIGITS = 40
COLUMNS = ("method", "result", "exact", "relative_error", "error_ulps")


def decimal(x, fmt: FormatSpec = BINARY64) -> str:
    """Shortest round-trip decimal of a value of ``fmt``."""
    return shortest_roundtrip_decimal(x, fmt)


def exact_text(q) -> str:
    """A rational as a decimal string; ``~`` marks a 40-digit rounding."""
    if isinstance(q, float) and not math.isfinite(q):
        return decimal(q)
    q = Fraction(q)
    if q == 0:
        return "0"
    rounded = round_to_digits(q, EXACT_DIGITS)
    prefix = "" if rounded == q else "~"
    sign = "-" if rounded < 0 else ""
    v = abs(rounded)
    exponent = 0
    while v >= 10:
        v /= 10
        exponent += 1
    while v < 1:
        v *= 10
        exponent -= 1
    digits = str(round(v * 10 ** (EXACT_DIGITS - 1))).rstrip("0") or "0"
    if -5 <= exponent < 21:
        if exponent >= len(digits) - 1:
            body = digits + "0" * (exponent - len(digits) + 1)
        elif exponent >= 0:
            body = digits[:exponent + 1] + "." + digits[exponent + 1:]
        else:
            body = "0." + "0" * (-exponent - 1) + digits
    else:
        body = digits[0] + ("." + digits[1:] if len(digits) > 1 else "") + f"e{exponent:+03d}"
    return prefix + sign + body


def _metric(value) -> str:
    if value is None:
        return ""
    return decimal(float(value))


@dataclass
class Row:
    method: str
    result: str
    exact: str = ""
    relative_error: float | None = None
    error_ulps: float | None = None
    extra: dict = field(default_factory=dict)
    value: float | None = None  # raw result, for binary output

    def as_dict(self) -> dict:
        out = {
            "method": self.method,
            "result": self.result,
            "exact": self.exact,
            "relative_error": _metric(self.relative_error),
            "error_ulps": _metric(self.error_ulps),
        }
        out.update({k: _plain(v) for k, v in self.extra.items()})
        return out


def _plain(v):
    if isinstance(v, bool) or v is None or isinstance(v, (int, str)):
        return v
    if isinstance(v, (float, Fraction)):
        return decimal(float(v))
    return str(v)


def measured_row(method: str, result, exact, fmt: FormatSpec, **extra) -> Row:
    """Row comparing a computed value of ``fmt`` with its exact counterpart."""
    rel = relative_error(result, exact)
    if Fraction(exact) == 0:
        ulps = 0 if (math.isfinite(float(result)) and Fraction(result) == 0) else math.inf
    else:
        ulps = error_ulps(result, exact, fmt)
    if correct_digits(result, exact) < 1:
        extra.setdefault("note", "no correct digits")
    return Row(method, decimal(result, fmt), exact_text(exact), float(rel), float(ulps), extra,
               float(result))


@dataclass
class Report:
    command: str
    configuration: dict
    rows: list[Row]

    def sorted_rows(self) -> list[Row]:
        def key(row: Row):
            u = row.error_ulps
            return (u is None, math.isnan(u) if u is not None else False,
                    0.0 if u is None or math.isnan(u) else u)
        return sorted(self.rows, key=key)

    def as_dict(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "configuration": {k: _plain(v) for k, v in self.configuration.items()},
            "rows": [r.as_dict() for r in self.sorted_rows()],
        }

    def _columns(self, rows: list[dict]) -> list[str]:
        columns = list(COLUMNS)
        for row in rows:
            columns.extend(k for k in row if k not in columns)
        return columns

    def render(self, style: str) -> str:
        data = self.as_dict()
        if style == "json":
            return json.dumps(data, indent=2, ensure_ascii=False) + "\n"
        rows = data["rows"]
        columns = self._columns(rows)
        if style == "csv":
            buffer = io.StringIO()
            writer = csv.DictWriter(buffer, columns, lineterminator="\n", restval="")
            writer.writeheader()
            writer.writerows(rows)
            return buffer.getvalue()
        return self._table(data, rows, columns)

    @staticmethod
    def _table(data: dict, rows: list[dict], columns: list[str]) -> str:
        config = ", ".join(f"{k}={v}" for k, v in data["configuration"].items())
        lines = [f"{data['command']}: {config}"]
        cells = [[_cell(r.get(c)) for c in columns] for r in rows]
        widths = [max([len(c)] + [len(row[i]) for row in cells]) for i, c in enumerate(columns)]
        lines.append("  ".join(c.ljust(w) for c, w in zip(columns, widths)).rstrip())
        lines.append("  ".join("-" * w for w in widths))
        for row in cells:
            lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
        return "\n".join(lines) + "\n"


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)
