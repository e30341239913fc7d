"""Problem files: a single JSON document describing one experiment.

Indices in files are 1-based (e1..er, x1..xn).  Rationals may be written as
"p/q" strings, integers, or {"numerator": p, "denominator": q} objects;
polynomials as text in the exactcore syntax or as plain numbers.
"""

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..chart import ChartAlgebroid, FullConnection, IISData
from ..errors import ParseError, SchemaError
from ..exactcore import Matrix, Poly, format_rational, parse_poly, parse_rational
from ..liepair_point import LieAlgebraData, LiePairPoint, PointConnection

TASKS = ("validate", "atiyah-pair", "atiyah-iis", "check-iis", "rho-star-check", "fibration", "catalog")
POINT_TASKS = {"atiyah-pair"}
IIS_TASKS = {"atiyah-iis", "check-iis", "rho-star-check"}
TOP_LEVEL = {"task", "lie_algebra", "subalgebra", "chart", "iis", "extension", "fibration", "options"}


@dataclass(frozen=True)
class TaskRequest:
    task: str
    pair: Optional[LiePairPoint] = None
    alg: Optional[ChartAlgebroid] = None
    iis: Optional[IISData] = None
    point_extension: Optional[PointConnection] = None
    chart_extension: Optional[FullConnection] = None
    fibration: Optional[tuple] = None
    options: dict = field(default_factory=dict)


# -- field readers ------------------------------------------------------------


def _get(obj, key, path, kind=None, required=True):
    if not isinstance(obj, dict):
        raise SchemaError(path, "expected an object")
    if key not in obj:
        if required:
            raise SchemaError(f"{path}.{key}" if path else key, "missing")
        return None
    value = obj[key]
    where = f"{path}.{key}" if path else key
    if kind is not None and not isinstance(value, kind):
        raise SchemaError(where, f"expected {_kind_name(kind)}")
    return value


def _kind_name(kind):
    names = {int: "an integer", list: "a list", dict: "an object", str: "a string"}
    return names.get(kind, str(kind))


def _int(obj, key, path, low=None, high=None, required=True):
    value = _get(obj, key, path, required=required)
    if value is None:
        return None
    where = f"{path}.{key}" if path else key
    if isinstance(value, bool) or not isinstance(value, int):
        raise SchemaError(where, "expected an integer")
    if low is not None and value < low:
        raise SchemaError(where, f"must be at least {low}")
    if high is not None and value > high:
        raise SchemaError(where, f"must be at most {high}")
    return value


def read_rational(value, where):
    if isinstance(value, bool):
        raise SchemaError(where, "expected a rational")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return parse_rational(value)
        except ParseError as exc:
            raise SchemaError(where, str(exc)) from exc
    if isinstance(value, dict):
        num, den = value.get("numerator"), value.get("denominator")
        if not isinstance(num, int) or isinstance(num, bool):
            raise SchemaError(f"{where}.numerator", "expected an integer")
        if not isinstance(den, int) or isinstance(den, bool):
            raise SchemaError(f"{where}.denominator", "expected an integer")
        if den == 0:
            raise SchemaError(f"{where}.denominator", "must be nonzero")
        return Fraction(num, den)
    raise SchemaError(where, "expected a rational")


def read_poly(value, nvars, where):
    if isinstance(value, str):
        try:
            return parse_poly(value, nvars)
        except ParseError as exc:
            raise ParseError(f"{where}: {exc.reason}", exc.text, exc.position) from exc
    return Poly.const(nvars, read_rational(value, where))


def read_poly_matrix(value, nvars, rows, cols, where):
    if not isinstance(value, list) or len(value) != rows:
        raise SchemaError(where, f"expected {rows} rows")
    out = []
    for i, row in enumerate(value):
        if not isinstance(row, list) or len(row) != cols:
            raise SchemaError(f"{where}[{i}]", f"expected {cols} entries")
        out.append([read_poly(v, nvars, f"{where}[{i}][{j}]") for j, v in enumerate(row)])
    return Matrix(out, zero=Poly.zero(nvars), cols=cols)


def read_matrix_list(value, count, nvars, rows, cols, where):
    if not isinstance(value, list) or len(value) != count:
        raise SchemaError(where, f"expected {count} matrices")
    return tuple(read_poly_matrix(v, nvars, rows, cols, f"{where}[{k}]") for k, v in enumerate(value))


def _bracket_list(value, dim, where, read):
    """[{i, j, coeffs: [[k, value]]}] -> {(i, j): {k: value}} with 0-based indices."""
    if not isinstance(value, list):
        raise SchemaError(where, "expected a list")
    out = {}
    for n, item in enumerate(value):
        here = f"{where}[{n}]"
        i = _int(item, "i", here, 1, dim) - 1
        j = _int(item, "j", here, 1, dim) - 1
        if i == j:
            raise SchemaError(here, "bracket of a basis element with itself is zero")
        if (i, j) in out or (j, i) in out:
            raise SchemaError(here, "bracket given twice")
        coeffs = _get(item, "coeffs", here, list)
        entry = {}
        for t, pair in enumerate(coeffs):
            at = f"{here}.coeffs[{t}]"
            if not isinstance(pair, list) or len(pair) != 2:
                raise SchemaError(at, "expected [k, value]")
            k = pair[0]
            if isinstance(k, bool) or not isinstance(k, int) or not 1 <= k <= dim:
                raise SchemaError(f"{at}[0]", f"index must be in 1..{dim}")
            if k - 1 in entry:
                raise SchemaError(f"{at}[0]", "index repeated")
            entry[k - 1] = read(pair[1], f"{at}[1]")
        out[(i, j)] = entry
    return out


# -- sections -----------------------------------------------------------------------


def _read_pair(doc):
    la = _get(doc, "lie_algebra", "", dict)
    dim = _int(la, "dim", "lie_algebra", 1, 12)
    brackets = _bracket_list(la.get("brackets", []), dim, "lie_algebra.brackets", read_rational)
    g = LieAlgebraData.from_brackets(dim, brackets)
    sub = _get(doc, "subalgebra", "", dict)
    q = _int(sub, "q", "subalgebra", 0, dim)
    return LiePairPoint(g, q)


def _read_chart(doc):
    ch = _get(doc, "chart", "", dict)
    n = _int(ch, "nvars", "chart", 0, 12)
    r = _int(ch, "rank", "chart", 0, 12)
    anchor = read_poly_matrix(_get(ch, "anchor", "chart", list), n, n, r, "chart.anchor")
    brackets = _bracket_list(ch.get("structfn", []), r, "chart.structfn", lambda v, w: read_poly(v, n, w))
    return ChartAlgebroid.build(n, r, anchor.tolist(), brackets)


def _read_iis(doc, alg):
    sec = _get(doc, "iis", "", dict)
    p = _int(sec, "p", "iis", 0, alg.nvars)
    q = _int(sec, "q", "iis", 0, alg.rank)
    m = alg.rank - q
    gammas = read_matrix_list(_get(sec, "christoffel", "iis", list), p, alg.nvars, m, m, "iis.christoffel")
    frame = None
    if sec.get("flat_frame") is not None:
        frame = read_poly_matrix(sec["flat_frame"], alg.nvars, m, m, "iis.flat_frame")
    return IISData(alg, p, q, gammas, frame)


def _read_extension(doc, pair, alg):
    sec = _get(doc, "extension", "", dict, required=False)
    if sec is None:
        return None, None
    if pair is not None:
        n = pair.n
        gamma = _get(sec, "gamma", "extension", list)
        if len(gamma) != n:
            raise SchemaError("extension.gamma", f"expected {n} planes")
        planes = []
        for a, plane in enumerate(gamma):
            if not isinstance(plane, list) or len(plane) != n:
                raise SchemaError(f"extension.gamma[{a}]", f"expected {n} rows")
            rows = []
            for b, row in enumerate(plane):
                if not isinstance(row, list) or len(row) != n:
                    raise SchemaError(f"extension.gamma[{a}][{b}]", f"expected {n} entries")
                rows.append([read_rational(v, f"extension.gamma[{a}][{b}][{k}]") for k, v in enumerate(row)])
            planes.append(rows)
        return PointConnection(planes), None
    mats = read_matrix_list(_get(sec, "christoffel_full", "extension", list), alg.nvars, alg.nvars,
                            alg.rank, alg.rank, "extension.christoffel_full")
    return None, FullConnection(mats)


def _read_options(doc):
    sec = _get(doc, "options", "", dict, required=False) or {}
    out = {}
    bound = _int(sec, "degree_bound", "options", 0, 12, required=False)
    if bound is not None:
        out["degree_bound"] = bound
    seed = _int(sec, "seed", "options", 0, required=False)
    if seed is not None:
        out["seed"] = seed
    fmt = _get(sec, "format", "options", str, required=False)
    if fmt is not None:
        if fmt not in ("text", "json"):
            raise SchemaError("options.format", "must be 'text' or 'json'")
        out["format"] = fmt
    unknown = set(sec) - {"degree_bound", "seed", "format"}
    if unknown:
        raise SchemaError(f"options.{sorted(unknown)[0]}", "unknown option")
    return out


def parse_document(doc, task=None) -> TaskRequest:
    if not isinstance(doc, dict):
        raise SchemaError("(document)", "expected a JSON object")
    unknown = set(doc) - TOP_LEVEL
    if unknown:
        raise SchemaError(sorted(unknown)[0], "unknown section")
    if task is None:
        task = _get(doc, "task", "", str)
    if task not in TASKS:
        raise SchemaError("task", f"unknown task {task!r}")
    options = _read_options(doc)
    if task == "catalog":
        return TaskRequest(task, options=options)

    pair = alg = iis = None
    if "lie_algebra" in doc:
        if "chart" in doc:
            raise SchemaError("chart", "a problem has either a lie_algebra or a chart section")
        pair = _read_pair(doc)
    elif "chart" in doc:
        alg = _read_chart(doc)
        if "iis" in doc:
            iis = _read_iis(doc, alg)
    else:
        raise SchemaError("lie_algebra", "missing (or give a chart section)")

    if task in POINT_TASKS and pair is None:
        raise SchemaError("lie_algebra", f"task {task} needs a Lie algebra payload")
    if task in IIS_TASKS and iis is None:
        raise SchemaError("iis", f"task {task} needs chart and iis sections")
    if task == "fibration" and alg is None:
        raise SchemaError("chart", "task fibration needs a chart payload")

    point_ext, chart_ext = _read_extension(doc, pair, alg)
    fib = None
    sec = _get(doc, "fibration", "", dict, required=False)
    if sec is not None:
        if alg is None:
            raise SchemaError("fibration", "needs a chart payload")
        fib = (_int(sec, "p", "fibration", 0, alg.nvars), _int(sec, "q", "fibration", 0, alg.rank))
    elif task == "fibration":
        if iis is None:
            raise SchemaError("fibration", "missing (or give an iis section)")
        fib = (iis.p, iis.q)
    return TaskRequest(task, pair, alg, iis, point_ext, chart_ext, fib, options)


def parse_input(text, task=None) -> TaskRequest:
    """Parse a problem file.  ``task`` overrides the document's task field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", text, exc.pos) from exc
    return parse_document(doc, task)


# -- writing problems ---------------------------------------------------------------


def _rat(v):
    return format_rational(Fraction(v))


def _matrix(mat):
    return [[str(e) for e in row] for row in mat.entries]


def _bracket_entries(structfn, dim, fmt):
    out = []
    for i in range(dim):
        for j in range(i + 1, dim):
            coeffs = [[k + 1, fmt(v)] for k, v in enumerate(structfn[i][j]) if v]
            if coeffs:
                out.append({"i": i + 1, "j": j + 1, "coeffs": coeffs})
    return out


def dump_document(req: TaskRequest) -> dict:
    doc = {"task": req.task}
    if req.pair is not None:
        g = req.pair.g
        doc["lie_algebra"] = {"dim": g.dim, "brackets": _bracket_entries(g.c, g.dim, _rat)}
        doc["subalgebra"] = {"q": req.pair.q}
    if req.alg is not None:
        alg = req.alg
        doc["chart"] = {
            "nvars": alg.nvars,
            "rank": alg.rank,
            "anchor": _matrix(alg.anchor),
            "structfn": _bracket_entries(alg.structfn, alg.rank, str),
        }
    if req.iis is not None:
        sec = {"p": req.iis.p, "q": req.iis.q, "christoffel": [_matrix(g) for g in req.iis.christoffel]}
        if req.iis.flat_frame is not None:
            sec["flat_frame"] = _matrix(req.iis.flat_frame)
        doc["iis"] = sec
    if req.point_extension is not None:
        doc["extension"] = {"gamma": [[[_rat(v) for v in row] for row in plane]
                                      for plane in req.point_extension.gamma]}
    if req.chart_extension is not None:
        doc["extension"] = {"christoffel_full": [_matrix(g) for g in req.chart_extension.christoffel_full]}
    if req.fibration is not None:
        doc["fibration"] = {"p": req.fibration[0], "q": req.fibration[1]}
    if req.options:
        doc["options"] = dict(req.options)
    return doc


def dump_problem(req: TaskRequest) -> str:
    return json.dumps(dump_document(req), sort_keys=True, indent=2) + "\n"
