from fractions import Fraction
from itertools import combinations

import pytest

from atiyah_lab import catalog
from atiyah_lab.errors import ConsistencyError, InputError, PreconditionError, UnsupportedDegreeError
from atiyah_lab.exactcore import Matrix
from atiyah_lab.liepair_point import (
    LieAlgebraData,
    LiePairPoint,
    PointConnection,
    atiyah_class_decide,
    atiyah_cocycle_point,
    bott_rep,
    ce_differential,
    coboundary_system,
    construct_default_extension,
    form_from_array,
    is_point_extension,
    naive_ideal_check,
    point_extension_difference,
    validate_lie_algebra,
    zero_form,
)
from atiyah_lab.randomized import make_rng, random_point_extension
from oracles import jacobiator, point_cocycle

AFF1 = LiePairPoint(LieAlgebraData.from_brackets(2, {(0, 1): {1: 1}}), 1)
HEIS_CENTER = LiePairPoint(LieAlgebraData.from_brackets(3, {(1, 2): {0: 1}}), 1)


def abelian_pair(dim, q):
    return LiePairPoint(LieAlgebraData.abelian(dim), q)


def aff1_with_delta(delta):
    gamma = [[[0, 0], [0, 0]], [[0, 0], [0, 0]]]
    gamma[0][1][1] = 1
    gamma[1][1][1] = delta
    return PointConnection(gamma)


def test_validate_examples():
    assert validate_lie_algebra(LieAlgebraData.abelian(3)).ok
    assert validate_lie_algebra(AFF1.g).ok
    bad = LieAlgebraData.from_brackets(3, {(0, 1): {2: 1}, (0, 2): {0: 1}})
    report = validate_lie_algebra(bad)
    assert [v["indices"] for v in report.violations] == [[1, 2, 3]]
    assert any(jacobiator(bad.c, 0, 1, 2))


def test_antisymmetry_violation_is_reported():
    c = [[[0] * 2 for _ in range(2)] for _ in range(2)]
    c[0][1][1] = 1
    report = validate_lie_algebra(LieAlgebraData(2, c))
    assert report.violations[0]["kind"] == "antisymmetry"


def test_bott_rep_examples():
    assert bott_rep(AFF1) == [Matrix([[1]])]
    assert all(b.is_zero() for b in bott_rep(abelian_pair(4, 2)))
    assert all(b.is_zero() for b in bott_rep(HEIS_CENTER))


def test_bott_rep_requires_closure():
    g = LieAlgebraData.from_brackets(3, {(0, 1): {2: 1}})
    with pytest.raises(InputError):
        bott_rep(LiePairPoint(g, 2))


def test_default_extension_examples():
    gamma = construct_default_extension(AFF1).gamma
    assert gamma[0][1][1] == 1
    assert sum(v != 0 for plane in gamma for row in plane for v in row) == 1
    for pair in (abelian_pair(3, 1), HEIS_CENTER):
        assert not any(v for plane in construct_default_extension(pair).gamma for row in plane for v in row)


def test_extension_checks():
    for entry in catalog.point_pairs():
        assert is_point_extension(entry.payload, construct_default_extension(entry.payload)).ok
    bad = aff1_with_delta(0).gamma
    bad = [[list(r) for r in p] for p in bad]
    bad[1][0][1] = 1
    report = is_point_extension(AFF1, PointConnection(bad))
    assert [v["kind"] for v in report.violations] == ["preserves_J"]
    ok = [[list(r) for r in p] for p in aff1_with_delta(0).gamma]
    ok[1][1][0] = 5
    assert is_point_extension(AFF1, PointConnection(ok)).ok


@pytest.mark.parametrize("delta", [0, 3, Fraction(-7, 2)])
def test_aff1_cocycle_and_primitive(delta):
    conn = aff1_with_delta(delta)
    omega = atiyah_cocycle_point(AFF1, conn)
    assert omega.values[(0,)][0][0][0] == -delta
    assert point_cocycle(AFF1.g.c, conn.gamma, 1)[0, 0, 0, 0] == -delta
    verdict = atiyah_class_decide(AFF1, conn)
    assert verdict.vanishes
    assert verdict.primitive.values[()][0][0][0] == delta


def test_cocycle_requires_extension():
    bad = [[list(r) for r in p] for p in aff1_with_delta(0).gamma]
    bad[0][1][1] = 2
    with pytest.raises(PreconditionError):
        atiyah_cocycle_point(AFF1, PointConnection(bad))


def test_zero_cocycles():
    assert atiyah_cocycle_point(abelian_pair(3, 1), construct_default_extension(abelian_pair(3, 1))).is_zero()
    assert atiyah_cocycle_point(HEIS_CENTER, construct_default_extension(HEIS_CENTER)).is_zero()


def test_ce_differential_examples():
    c = Fraction(5, 3)
    phi = form_from_array(AFF1, 0, {(): [[[c]]]})
    assert ce_differential(AFF1, phi).values[(0,)][0][0][0] == -c
    assert ce_differential(AFF1, zero_form(AFF1, 0)).is_zero()
    pair = abelian_pair(3, 1)
    arr = [[[Fraction(a + 2 * b - cc) for b in range(2)] for a in range(2)] for cc in range(2)]
    assert ce_differential(pair, form_from_array(pair, 0, {(): arr})).is_zero()
    with pytest.raises(UnsupportedDegreeError):
        ce_differential(AFF1, zero_form(AFF1, 2))


def test_decide_examples():
    verdict = atiyah_class_decide(HEIS_CENTER)
    assert verdict.vanishes and verdict.primitive.is_zero()
    borel = catalog.get_entry("sl2_borel").payload
    verdict = atiyah_class_decide(borel)
    assert not verdict.vanishes
    system = coboundary_system(borel, verdict.cocycle)
    y = verdict.certificate["y"]
    for col in range(system.nunknowns):
        assert sum(yi * row.get(col, 0) for yi, row in zip(y, system.rows)) == 0
    assert sum(yi * b for yi, b in zip(y, system.rhs)) != 0


def test_decide_rejects_a_non_closed_cocycle(monkeypatch):
    import atiyah_lab.liepair_point as lp

    borel = catalog.get_entry("sl2_borel").payload
    real = lp.ce_differential
    monkeypatch.setattr(lp, "ce_differential", lambda pair, form: form if form.degree else real(pair, form))
    with pytest.raises(ConsistencyError):
        atiyah_class_decide(borel)


def test_naive_ideal_examples():
    assert naive_ideal_check(HEIS_CENTER)
    assert not naive_ideal_check(AFF1)
    assert naive_ideal_check(abelian_pair(4, 2))


def test_cocycle_matches_oracle_on_random_extensions():
    rng = make_rng(3)
    for entry in catalog.point_pairs():
        pair = entry.payload
        for _ in range(5):
            conn = random_point_extension(rng, pair)
            omega = atiyah_cocycle_point(pair, conn)
            ref = point_cocycle(pair.g.c, conn.gamma, pair.q)
            for (j, c, a, b), v in ref.items():
                assert omega.values[(j,)][c][a][b] == v


def test_bott_flatness_and_extension_independence():
    rng = make_rng(4)
    for entry in catalog.point_pairs():
        pair = entry.payload
        mats = bott_rep(pair)
        for i, j in combinations(range(pair.q), 2):
            lhs = sum((mats[k].scale(pair.g.c[i][j][k]) for k in range(pair.q)), Matrix.zeros(pair.m, pair.m))
            assert lhs == mats[i].commutator(mats[j])
        expected = entry.expected["atiyah"] == "vanishes"
        for _ in range(5):
            c1, c2 = random_point_extension(rng, pair), random_point_extension(rng, pair)
            diff = atiyah_cocycle_point(pair, c1) - atiyah_cocycle_point(pair, c2)
            assert diff == ce_differential(pair, point_extension_difference(pair, c1, c2))
            assert atiyah_class_decide(pair, c1).vanishes == expected


def test_quotient_indices_in_certificate_are_one_based():
    borel = catalog.get_entry("sl2_borel").payload
    entries = atiyah_class_decide(borel).certificate["entries"]
    for item in entries:
        j, c, a, b = item["index"]
        assert 1 <= j <= borel.q < min(c, a, b) and max(c, a, b) <= borel.n
