"""Canonical report serialization.

Rationals print as "p/q", polynomials in graded-lex order, JSON with sorted
keys and no insignificant whitespace, so identical inputs give identical
bytes.
"""

import json
from dataclasses import dataclass
from fractions import Fraction

from ..chart import IISForm
from ..exactcore import Matrix, Poly, format_rational
from ..liepair_point import CEForm

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_VIOLATION = 2
EXIT_INCONCLUSIVE = 3
EXIT_INTERNAL = 4


@dataclass
class Report:
    body: dict
    exit_code: int = EXIT_OK


def iis_form_json(form: IISForm, p):
    out = {}
    for key, mats in form.values.items():
        label = ",".join(f"x{mu + 1}" for mu in key) or "-"
        out[label] = {f"x{p + k + 1}": to_jsonable(mat) for k, mat in enumerate(mats)}
    return out


def ce_form_json(form: CEForm):
    return {",".join(f"e{j + 1}" for j in key) or "-": to_jsonable(arr) for key, arr in form.values.items()}


def to_jsonable(value):
    if isinstance(value, bool) or value is None or isinstance(value, str):
        return value
    if isinstance(value, int):
        return value
    if isinstance(value, Fraction):
        return format_rational(value)
    if isinstance(value, Poly):
        return str(value)
    if isinstance(value, Matrix):
        return [[to_jsonable(e) for e in row] for row in value.entries]
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    raise TypeError(f"cannot serialize {type(value).__name__}")


def _flatten(prefix, value, out):
    if isinstance(value, dict):
        if not value:
            out.append((prefix, "{}"))
        for k, v in value.items():
            _flatten(f"{prefix}.{k}" if prefix else k, v, out)
    elif isinstance(value, list):
        if not value:
            out.append((prefix, "[]"))
        for i, v in enumerate(value):
            _flatten(f"{prefix}.{i + 1}", v, out)
    elif isinstance(value, bool):
        out.append((prefix, "true" if value else "false"))
    elif value is None:
        out.append((prefix, "null"))
    else:
        out.append((prefix, str(value)))


def emit_report(report, fmt="json"):
    body = to_jsonable(report.body if isinstance(report, Report) else report)
    if fmt == "json":
        return json.dumps(body, sort_keys=True, separators=(",", ":"), ensure_ascii=True) + "\n"
    if fmt == "text":
        lines = []
        _flatten("", body, lines)
        return "".join(f"{k}: {v}\n" for k, v in sorted(lines))
    raise ValueError(f"unknown report format {fmt!r}")
