"""Dispatch of parsed requests to the library operations."""

import json
from functools import lru_cache
from pathlib import Path

from .. import catalog
from ..chart import (
    FAIL,
    TRUNCATED,
    anchor_spans_leaves,
    atiyah_cocycle_iis,
    bott_restriction_report,
    basic_connection,
    check_iis,
    construct_extension_chart,
    is_chart_extension,
    j_preservation_report,
    make_coordinate_fibration,
    pair_cocycle,
    primitive_search,
    rho_star,
    validate_chart_algebroid,
    validate_iis_data,
)
from ..chart.iis import require_valid
from ..errors import PreconditionError
from ..liepair_point import (
    atiyah_class_decide,
    is_point_extension,
    naive_ideal_check,
    validate_pair,
)
from .report import (
    EXIT_INCONCLUSIVE,
    EXIT_INTERNAL,
    EXIT_OK,
    EXIT_VIOLATION,
    Report,
    ce_form_json,
    emit_report,
    iis_form_json,
    to_jsonable,
)
from .schema import TaskRequest

GOLDEN_DIR = Path(__file__).resolve().parent.parent / "golden"
SEARCH_DIMS = (2, 3, 4)
SEARCH_COEFFS = (-1, 0, 1)


def run_task(req: TaskRequest, golden_dir=None, regen_golden=False) -> Report:
    handler = HANDLERS[req.task]
    if req.task == "catalog":
        return handler(req, Path(golden_dir) if golden_dir else GOLDEN_DIR, regen_golden)
    return handler(req)


# -- point ---------------------------------------------------------------------------


def _validate(req):
    if req.pair is not None:
        report = validate_pair(req.pair)
        body = {"task": "validate", "subject": "lie_pair", **report.to_dict()}
        if report.ok:
            body["naive_ideal"] = naive_ideal_check(req.pair)
        return Report(body, EXIT_OK if report.ok else EXIT_VIOLATION)
    report = validate_chart_algebroid(req.alg)
    body = {"task": "validate", "subject": "chart_algebroid", **report.to_dict()}
    ok = report.ok
    if req.iis is not None:
        iis = validate_iis_data(req.iis)
        body["iis"] = iis.to_dict()
        ok = ok and iis.ok
        body["status"] = "pass" if ok else "fail"
    return Report(body, EXIT_OK if ok else EXIT_VIOLATION)


def _atiyah_pair(req):
    pair = req.pair
    if req.point_extension is not None:
        report = is_point_extension(pair, req.point_extension)
        if not report.ok:
            raise PreconditionError(f"extension rejected: {report.violations[0]}")
    verdict = atiyah_class_decide(pair, req.point_extension)
    body = {
        "task": "atiyah-pair",
        "verdict": "vanishes" if verdict.vanishes else "nonzero",
        "naive_ideal": naive_ideal_check(pair),
        "cocycle": ce_form_json(verdict.cocycle),
    }
    if verdict.vanishes:
        body["certificate"] = {"primitive": ce_form_json(verdict.primitive)}
    else:
        body["certificate"] = {"fredholm": verdict.certificate["entries"]}
    return Report(body)


# -- chart ---------------------------------------------------------------------------


def _extension(req):
    require_valid(req.iis)
    if req.chart_extension is None:
        return construct_extension_chart(req.iis)
    report = is_chart_extension(req.iis, req.chart_extension)
    if not report.ok:
        raise PreconditionError(f"extension rejected: {report.violations[0]}")
    return req.chart_extension


def _atiyah_iis(req):
    data = req.iis
    omega = atiyah_cocycle_iis(data, _extension(req))
    result = primitive_search(data, omega, req.options.get("degree_bound"))
    body = {
        "task": "atiyah-iis",
        "cocycle": iis_form_json(omega, data.p),
        "degree_bound": result.degree_bound,
    }
    if result.found:
        body["verdict"] = "vanishes"
        body["certificate"] = {"primitive": iis_form_json(result.primitive, data.p)}
        return Report(body)
    body["verdict"] = "none_up_to_degree"
    body["certificate"] = {"fredholm": list(result.certificates)}
    return Report(body, EXIT_INCONCLUSIVE)


def _check_iis(req):
    bound = req.options.get("degree_bound")
    check = check_iis(req.iis) if bound is None else check_iis(req.iis, bound)
    body = {"task": "check-iis", **check.to_dict(), "rho_j_is_f_m": anchor_spans_leaves(req.iis)}
    verdicts = (check.iis1, check.iis2, check.iis3)
    if FAIL in verdicts:
        code = EXIT_VIOLATION
    elif TRUNCATED in verdicts:
        code = EXIT_INCONCLUSIVE
    else:
        code = EXIT_OK
    return Report(body, code)


def _rho_star_check(req):
    data = req.iis
    conn = _extension(req)
    tables = basic_connection(data.alg, conn)
    lhs = rho_star(data.alg, data, atiyah_cocycle_iis(data, conn))
    rhs = pair_cocycle(data.alg, data.q, conn)
    holds = lhs == rhs
    body = {
        "task": "rho-star-check",
        "identity_holds": holds,
        "rho_star": ce_form_json(lhs),
        "pair_cocycle": ce_form_json(rhs),
        "j_preservation": j_preservation_report(data.alg, data.q, tables).to_dict()["status"],
        "bott_restriction": bott_restriction_report(data.alg, data.q, tables).to_dict()["status"],
    }
    return Report(body, EXIT_OK if holds else EXIT_INTERNAL)


def _fibration(req):
    p, q = req.fibration
    result = make_coordinate_fibration(req.alg, p, q)
    body = {"task": "fibration", "p": p, "q": q, "fibered": result.fibered}
    if not result.fibered:
        body["witness"] = result.witness
        return Report(body)
    quotient = result.quotient
    omega = atiyah_cocycle_iis(result.nabla_phi, result.projectable_conn)
    body["quotient"] = {
        "nvars": quotient.nvars,
        "rank": quotient.rank,
        "anchor": to_jsonable(quotient.anchor),
        "valid": validate_chart_algebroid(quotient).ok,
    }
    body["projectable_cocycle_zero"] = omega.is_zero()
    return Report(body, EXIT_OK if omega.is_zero() else EXIT_INTERNAL)


# -- catalog ---------------------------------------------------------------------------


@lru_cache(maxsize=None)
def search_report(max_dim, coeffs=SEARCH_COEFFS):
    entry = catalog.search_nonvanishing_pair(max_dim, coeffs)
    body = {"max_dim": max_dim, "coeff_set": [str(c) for c in coeffs]}
    if entry is None:
        body["result"] = "none"
        return body
    pair = entry.payload
    verdict = atiyah_class_decide(pair)
    body.update(
        result="found",
        name=entry.name,
        dim=pair.n,
        q=pair.q,
        brackets=[
            {"i": i + 1, "j": j + 1, "coeffs": [[k + 1, v] for k, v in enumerate(pair.g.c[i][j]) if v]}
            for i in range(pair.n) for j in range(i + 1, pair.n) if any(pair.g.c[i][j])
        ],
        cocycle=ce_form_json(verdict.cocycle),
        certificate={"fredholm": entry.certificate["entries"]},
    )
    return to_jsonable(body)


def catalog_report():
    entries = {}
    for entry in catalog.all_entries():
        got = catalog.evaluate_entry(entry)
        entries[entry.name] = {"expected": entry.expected, "computed": got, "match": got == entry.expected}
    return to_jsonable({"entries": entries})


def _golden_files(golden_dir):
    files = {"catalog.json": catalog_report()}
    for d in SEARCH_DIMS:
        files[f"search_{d}.json"] = search_report(d)
    return {name: emit_report(body, "json") for name, body in files.items()}


def _catalog(req, golden_dir, regen):
    files = _golden_files(golden_dir)
    body = {"task": "catalog", "files": {}}
    code = EXIT_OK
    if regen:
        golden_dir.mkdir(parents=True, exist_ok=True)
    for name, text in sorted(files.items()):
        path = golden_dir / name
        if regen:
            path.write_text(text)
            body["files"][name] = "regenerated"
        elif not path.exists():
            body["files"][name] = "missing"
            code = EXIT_INTERNAL
        elif path.read_text() != text:
            body["files"][name] = "drift"
            code = EXIT_INTERNAL
        else:
            body["files"][name] = "match"
    report = json.loads(files["catalog.json"])
    mismatched = sorted(n for n, e in report["entries"].items() if not e["match"])
    body["entries"] = {n: e["computed"] for n, e in report["entries"].items()}
    body["mismatched"] = mismatched
    if mismatched:
        code = EXIT_INTERNAL
    for d in SEARCH_DIMS:
        res = json.loads(files[f"search_{d}.json"])
        body[f"search_{d}"] = res.get("name", "none")
    return Report(body, code)


HANDLERS = {
    "validate": _validate,
    "atiyah-pair": _atiyah_pair,
    "atiyah-iis": _atiyah_iis,
    "check-iis": _check_iis,
    "rho-star-check": _rho_star_check,
    "fibration": _fibration,
    "catalog": _catalog,
}


def request_for_entry(entry, task, **options):
    """A request running ``task`` on a catalog entry's payload."""
    if entry.kind == "point":
        return TaskRequest(task, pair=entry.payload, options=options)
    data = entry.payload
    if task == "fibration":
        fib = entry.fibration or (data.p, data.q)
        alg = entry.fibration_alg or data.alg
        return TaskRequest(task, alg=alg, fibration=fib, options=options)
    return TaskRequest(task, alg=data.alg, iis=data, options=options)

