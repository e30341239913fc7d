import io
import json
import shutil
import subprocess
import sys

import pytest

from atiyah_lab import catalog
from atiyah_lab.cli import (
    Report,
    TaskRequest,
    dump_problem,
    emit_report,
    main,
    parse_input,
    request_for_entry,
    run_task,
)
from atiyah_lab.cli.tasks import GOLDEN_DIR
from atiyah_lab.errors import ParseError, SchemaError

POINT_FILE = {
    "task": "atiyah-pair",
    "lie_algebra": {"dim": 3, "brackets": [{"i": 2, "j": 3, "coeffs": [[1, "1"]]}]},
    "subalgebra": {"q": 1},
}

# Rank-2 trivial bundle over R^2 with leafwise Christoffel symbol x2 and zero transverse block: omega = -1.
ABELIAN_FILE = {
    "task": "atiyah-iis",
    "chart": {"nvars": 2, "rank": 2, "anchor": [[0, 0], [0, 0]]},
    "iis": {"p": 1, "q": 1, "christoffel": [[["x2"]]]},
}


def run_cli(args, stdin=None):
    out = io.StringIO()
    if stdin is not None:
        old = sys.stdin
        sys.stdin = io.StringIO(stdin)
    try:
        code = main(args, stdout=out)
    finally:
        if stdin is not None:
            sys.stdin = old
    return code, out.getvalue()


def write(tmp_path, doc, name="problem.json"):
    path = tmp_path / name
    path.write_text(json.dumps(doc) if isinstance(doc, dict) else doc)
    return str(path)


# -- parsing -------------------------------------------------------------------------


def test_minimal_point_file():
    req = parse_input(json.dumps(POINT_FILE))
    assert req.task == "atiyah-pair"
    assert req.pair.q == 1 and req.pair.g.c[1][2][0] == 1 and req.pair.g.c[2][1][0] == -1


def test_zero_denominator_names_the_field():
    doc = json.loads(json.dumps(POINT_FILE))
    doc["lie_algebra"]["brackets"][0]["coeffs"][0][1] = {"numerator": 1, "denominator": 0}
    with pytest.raises(SchemaError) as info:
        parse_input(json.dumps(doc))
    assert info.value.field == "lie_algebra.brackets[0].coeffs[0][1].denominator"


def test_polynomial_syntax_error_reports_position():
    doc = {"task": "validate", "chart": {"nvars": 1, "rank": 1, "anchor": [["x1^"]]}}
    with pytest.raises(ParseError) as info:
        parse_input(json.dumps(doc))
    assert info.value.position == 3
    assert "chart.anchor[0][0]" in str(info.value)


@pytest.mark.parametrize(
    "doc, field",
    [
        ({"task": "nope"}, "task"),
        ({"task": "validate", "bogus": 1}, "bogus"),
        ({"task": "atiyah-pair", "chart": {"nvars": 1, "rank": 1, "anchor": [["1"]]}}, "lie_algebra"),
        ({"task": "check-iis", "chart": {"nvars": 1, "rank": 1, "anchor": [["1"]]}}, "iis"),
        ({**POINT_FILE, "options": {"degree_bound": -1}}, "options.degree_bound"),
        ({**POINT_FILE, "subalgebra": {"q": 4}}, "subalgebra.q"),
    ],
)
def test_schema_errors(doc, field):
    with pytest.raises(SchemaError) as info:
        parse_input(json.dumps(doc))
    assert info.value.field == field


def test_invalid_json_is_a_parse_error():
    with pytest.raises(ParseError):
        parse_input("{")


@pytest.mark.parametrize("entry", catalog.all_entries(), ids=lambda e: e.name)
def test_round_trip_of_catalog_payloads(entry):
    tasks = ["atiyah-pair"] if entry.kind == "point" else ["check-iis", "fibration"]
    for task in tasks:
        req = request_for_entry(entry, task)
        assert parse_input(dump_problem(req)) == req


def test_round_trip_with_extensions():
    from atiyah_lab.chart import construct_extension_chart
    from atiyah_lab.liepair_point import construct_default_extension

    pair = catalog.get_entry("sl2_borel").payload
    req = TaskRequest("atiyah-pair", pair=pair, point_extension=construct_default_extension(pair))
    assert parse_input(dump_problem(req)) == req
    data = catalog.get_entry("heisenberg_action_twisted").payload
    req = TaskRequest("rho-star-check", alg=data.alg, iis=data, chart_extension=construct_extension_chart(data),
                      options={"degree_bound": 3})
    assert parse_input(dump_problem(req)) == req


# -- reports ----------------------------------------------------------------------------


def test_emit_report_is_canonical():
    assert emit_report(Report({"status": "pass"}), "json") == '{"status":"pass"}\n'
    assert emit_report({"b": [1, True], "a": {"c": None}}, "text") == "a.c: null\nb.1: 1\nb.2: true\n"


def test_atiyah_pair_reports_primitive_and_certificate():
    heis = run_task(request_for_entry(catalog.get_entry("heisenberg_center"), "atiyah-pair"))
    assert heis.body["verdict"] == "vanishes"
    assert "primitive" in heis.body["certificate"]
    borel = run_task(request_for_entry(catalog.get_entry("sl2_borel"), "atiyah-pair"))
    assert borel.body["verdict"] == "nonzero"
    assert borel.body["certificate"]["fredholm"]


def test_chart_task_examples():
    bott = catalog.get_entry("tangent_bott_2_1")
    report = run_task(request_for_entry(bott, "check-iis"))
    assert (report.body["iis1"], report.body["iis2"], report.body["iis3"]) == ("pass", "pass", "pass")
    assert report.exit_code == 0
    report = run_task(request_for_entry(catalog.get_entry("action_aff1_line"), "rho-star-check"))
    assert report.body["identity_holds"] is True and report.exit_code == 0
    report = run_task(request_for_entry(catalog.get_entry("vector_bundle_exp"), "check-iis"))
    assert report.body["iis2"] == "truncated" and report.body["degree_bound"] == 6
    assert report.exit_code == 3


def test_atiyah_iis_inconclusive_at_low_degree():
    full = run_task(parse_input(json.dumps(ABELIAN_FILE)))
    assert full.body["verdict"] == "vanishes"
    assert full.body["certificate"]["primitive"] == {"-": {"x2": [["-x1"]]}}
    low = run_task(parse_input(json.dumps({**ABELIAN_FILE, "options": {"degree_bound": 0}})))
    assert low.body["verdict"] == "none_up_to_degree" and low.exit_code == 3
    assert low.body["certificate"]["fredholm"]


# -- command line ----------------------------------------------------------------------


def test_exit_codes(tmp_path):
    ok = write(tmp_path, POINT_FILE)
    assert run_cli(["--input", ok])[0] == 0
    bad_json = write(tmp_path, "{", "bad.json")
    assert run_cli(["--input", bad_json])[0] == 1
    assert run_cli(["--input", str(tmp_path / "missing.json")])[0] == 1
    jacobi = {"task": "validate", "lie_algebra": {"dim": 3, "brackets": [
        {"i": 1, "j": 2, "coeffs": [[3, 1]]}, {"i": 1, "j": 3, "coeffs": [[1, 1]]}]}, "subalgebra": {"q": 1}}
    assert run_cli(["--input", write(tmp_path, jacobi, "j.json")])[0] == 2
    assert run_cli(["--task", "validate", "--input", ok, "--regen-golden"])[0] == 1
    code, out = run_cli(["--task", "validate", "--input", "-", "--format", "text"], stdin=json.dumps(POINT_FILE))
    assert code == 0 and "status: pass" in out


def test_task_override_and_degree_flag(tmp_path):
    path = write(tmp_path, {**ABELIAN_FILE, "task": "check-iis"})
    code, out = run_cli(["--task", "atiyah-iis", "--input", path, "--degree-bound", "0"])
    assert code == 3 and json.loads(out)["degree_bound"] == 0


def test_byte_determinism(tmp_path):
    path = write(tmp_path, POINT_FILE)
    first = run_cli(["--input", path])
    assert run_cli(["--input", path]) == first


def test_golden_drift_is_detected(tmp_path):
    golden = tmp_path / "golden"
    shutil.copytree(GOLDEN_DIR, golden)
    code, out = run_cli(["--task", "catalog", "--golden-dir", str(golden)])
    assert code == 0 and set(json.loads(out)["files"].values()) == {"match"}
    (golden / "search_2.json").write_text('{"result":"found"}\n')
    code, out = run_cli(["--task", "catalog", "--golden-dir", str(golden)])
    assert code == 4 and json.loads(out)["files"]["search_2.json"] == "drift"
    code, _ = run_cli(["--task", "catalog", "--golden-dir", str(golden), "--regen-golden"])
    assert code == 0
    assert (golden / "search_2.json").read_text() == (GOLDEN_DIR / "search_2.json").read_text()
    (golden / "catalog.json").unlink()
    code, out = run_cli(["--task", "catalog", "--golden-dir", str(golden)])
    assert code == 4 and json.loads(out)["files"]["catalog.json"] == "missing"


def test_module_entry_point(tmp_path):
    path = write(tmp_path, POINT_FILE)
    proc = subprocess.run([sys.executable, "-m", "atiyah_lab", "--input", path],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0
    assert json.loads(proc.stdout)["verdict"] == "vanishes"
