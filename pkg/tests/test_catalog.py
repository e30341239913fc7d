import json

import pytest
import sympy

from atiyah_lab import catalog
from atiyah_lab.cli.report import emit_report
from atiyah_lab.cli.tasks import GOLDEN_DIR, search_report
from atiyah_lab.errors import InputError
from atiyah_lab.liepair_point import (
    atiyah_class_decide,
    coboundary_system,
    validate_pair,
)
from oracles import jacobiator

COEFFS = (-1, 0, 1)


@pytest.mark.parametrize("entry", catalog.all_entries(), ids=lambda e: e.name)
def test_entry_verdicts(entry):
    assert catalog.evaluate_entry(entry) == entry.expected


def test_point_pairs_cover_the_required_cases():
    names = {e.name for e in catalog.point_pairs()}
    assert {"abelian3_q1", "aff1", "heisenberg_center", "heisenberg_noncentral"} <= names
    for entry in catalog.point_pairs():
        assert validate_pair(entry.payload).ok


def test_entry_names_are_unique():
    names = [e.name for e in catalog.all_entries()]
    assert len(names) == len(set(names))
    with pytest.raises(InputError):
        catalog.get_entry("nope")


def test_tangent_bott_examples():
    entry = catalog.tangent_bott(1, 1)
    assert entry.payload.m == 0
    assert catalog.evaluate_entry(entry) == entry.expected
    with pytest.raises(InputError):
        catalog.tangent_bott(2, 3)


def test_action_aff1_line_variants():
    entry = catalog.get_entry("action_aff1_line")
    assert catalog.evaluate_entry(entry)["fibration"] == "not_fibered"
    fail = entry.variants["iis_fail"]
    assert catalog.evaluate_entry(fail)["iis1"] == "fail"


def test_search_dim2_is_empty():
    assert catalog.search_nonvanishing_pair(2, COEFFS) is None


def test_search_hit_is_independently_nonvanishing():
    entry = catalog.search_nonvanishing_pair(3, COEFFS)
    assert entry is not None and entry.name == "search_dim3_q2"
    pair = entry.payload
    n = pair.n
    for i in range(n):
        for j in range(n):
            for k in range(n):
                assert not any(jacobiator(pair.g.c, i, j, k))
    verdict = atiyah_class_decide(pair)
    system = coboundary_system(pair, verdict.cocycle)
    a = sympy.Matrix(system.dense())
    ab = a.row_join(sympy.Matrix(system.rhs))
    assert ab.rank() > a.rank()
    y = sympy.Matrix([entry.certificate["y"]])
    assert (y * a).is_zero_matrix
    assert (y * sympy.Matrix(system.rhs))[0] != 0
    assert catalog.search_nonvanishing_pair(4, COEFFS).payload == pair


@pytest.mark.parametrize("dim", [2, 3, 4])
def test_search_goldens(dim):
    text = (GOLDEN_DIR / f"search_{dim}.json").read_text()
    assert emit_report(search_report(dim), "json") == text
    body = json.loads(text)
    assert body["result"] == ("none" if dim == 2 else "found")


def test_search_rejects_large_dimensions():
    with pytest.raises(InputError):
        catalog.search_nonvanishing_pair(6, COEFFS)


def test_borel_certificate_verifies():
    pair = catalog.get_entry("sl2_borel").payload
    verdict = atiyah_class_decide(pair)
    assert not verdict.vanishes
    assert catalog.independent_rank_check(pair, verdict.cocycle)
