"""Worked examples and a brute-force search for a nonvanishing Atiyah class.

Every entry carries the verdicts it is expected to produce; the test suite
and the ``catalog`` CLI task recompute them.
"""

from dataclasses import dataclass, field
from functools import lru_cache
from fractions import Fraction
from itertools import combinations
from math import lcm
from typing import Optional

from .chart import (
    ChartAlgebroid,
    IISData,
    abelian_algebroid,
    anchor_spans_leaves,
    atiyah_cocycle_iis,
    check_iis,
    construct_extension_chart,
    make_coordinate_fibration,
    primitive_search,
    tangent_algebroid,
    validate_iis_data,
)
from .errors import ConsistencyError, InputError
from .exactcore import as_rational
from .liepair_point import (
    LieAlgebraData,
    LiePairPoint,
    atiyah_class_decide,
    closure_report,
    coboundary_system,
    naive_ideal_check,
)


@dataclass(frozen=True)
class CatalogEntry:
    """A named example.

    ``payload`` is a :class:`LiePairPoint` or an :class:`IISData` (which
    carries its algebroid).  ``fibration`` optionally names the (p, q) of a
    coordinate fibration to probe, on ``fibration_alg`` if set and on the
    payload's algebroid otherwise.
    """

    name: str
    payload: object
    expected: dict
    fibration: Optional[tuple] = None
    fibration_alg: Optional[ChartAlgebroid] = None
    variants: dict = field(default_factory=dict)
    certificate: Optional[dict] = None

    @property
    def kind(self):
        return "point" if isinstance(self.payload, LiePairPoint) else "chart"

    @property
    def alg(self):
        return None if self.kind == "point" else self.payload.alg


# -- point pairs ------------------------------------------------------------------


def _pair(dim, q, brackets):
    return LiePairPoint(LieAlgebraData.from_brackets(dim, brackets), q)


def point_pairs():
    """Lie pairs over a point with their naive-ideal and Atiyah verdicts."""
    specs = [
        ("abelian3_q1", 3, 1, {}, True, "vanishes"),
        ("abelian3_q2", 3, 2, {}, True, "vanishes"),
        ("aff1", 2, 1, {(0, 1): {1: 1}}, False, "vanishes"),
        # basis z, x, y with [x, y] = z
        ("heisenberg_center", 3, 1, {(1, 2): {0: 1}}, True, "vanishes"),
        # basis x, y, z with [x, y] = z and J spanned by x
        ("heisenberg_noncentral", 3, 1, {(0, 1): {2: 1}}, False, "vanishes"),
        ("heisenberg_zx", 3, 2, {(1, 2): {0: 1}}, True, "vanishes"),
        # h, e, f with [h, e] = e, [h, f] = -f, [e, f] = h
        ("sl2_cartan", 3, 1, {(0, 1): {1: 1}, (0, 2): {2: -1}, (1, 2): {0: 1}}, False, "vanishes"),
        ("sl2_borel", 3, 2, {(0, 1): {1: 1}, (0, 2): {2: -1}, (1, 2): {0: 1}}, False, "nonzero"),
        # gl2 = center c plus sl2 (h, e, f)
        ("gl2_center", 4, 1, {(1, 2): {2: 1}, (1, 3): {3: -1}, (2, 3): {1: 1}}, True, "vanishes"),
        ("gl2_sl2", 4, 3, {(0, 1): {1: 1}, (0, 2): {2: -1}, (1, 2): {0: 1}}, True, "vanishes"),
    ]
    return [
        CatalogEntry(name, _pair(dim, q, br), {"naive_ideal": naive, "atiyah": verdict})
        for name, dim, q, br, naive, verdict in specs
    ]


# -- chart entries ------------------------------------------------------------------


def _zero(n, m):
    return [[0] * m for _ in range(m)]


def tangent_bott(n, p):
    """TR^n with F_M = J = span{d_1..d_p} and the Bott connection."""
    if not 1 <= p <= n:
        raise InputError(f"need 1 <= p <= n, got n={n}, p={p}")
    m = n - p
    alg = tangent_algebroid(n)
    ident = [[1 if i == j else 0 for j in range(m)] for i in range(m)]
    data = IISData(alg, p, p, tuple(_zero(n, m) for _ in range(p)), ident)
    expected = {"validate": "pass", "iis1": "pass", "iis2": "pass", "iis3": "pass",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": True}
    return CatalogEntry(f"tangent_bott_{n}_{p}", data, expected, fibration=(p, p))


def aff1_line_algebroid():
    """aff(1) acting on the line: rho(e1) = d_1, rho(e2) = x1 d_1, [e1, e2] = e1."""
    return ChartAlgebroid.build(1, 2, [[1, "x1"]], {(0, 1): {0: 1}})


def aff1_line_dilation_first():
    """The same action algebroid with the dilation listed first."""
    return ChartAlgebroid.build(1, 2, [["x1", 1]], {(0, 1): {1: -1}})


def action_aff1_line():
    alg = aff1_line_algebroid()
    base = IISData(alg, 1, 1, ([[0]],), [[1]])
    failing = IISData(alg, 1, 1, ([[1]],))
    probe = aff1_line_dilation_first()
    expected = {"validate": "pass", "iis1": "pass", "iis2": "pass", "iis3": "pass",
                "fibration": "not_fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": True}
    fail_entry = CatalogEntry(
        "action_aff1_line_iis_fail", failing,
        {"validate": "pass", "iis1": "fail", "iis2": "fail", "iis3": "truncated",
         "atiyah_iis": "vanishes", "rho_j_is_f_m": True},
    )
    return CatalogEntry("action_aff1_line", base, expected, fibration=(1, 1), fibration_alg=probe,
                        variants={"iis_fail": fail_entry})


def action_aff1_plane():
    """rho(e1) = d_1, rho(e2) = x1 d_1 + x2 d_2, [e1, e2] = e1 with J = F_M spanned by e1, d_1."""
    alg = ChartAlgebroid.build(2, 2, [[1, "x1"], [0, "x2"]], {(0, 1): {0: 1}})
    data = IISData(alg, 1, 1, ([[0]],), [[1]])
    expected = {"validate": "pass", "iis1": "pass", "iis2": "pass", "iis3": "pass",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": True}
    return CatalogEntry("action_aff1_plane", data, expected, fibration=(1, 1))


def vector_bundle_shear():
    """Trivial rank-3 bundle over R^3, K = span{f1}, a flat non-trivial leafwise connection."""
    alg = abelian_algebroid(3, 3)
    data = IISData(
        alg, 2, 1,
        ([[0, "-x2*x3"], [0, 0]], [[0, "-x1*x3"], [0, 0]]),
        [[1, "x1*x2*x3"], [0, 1]],
    )
    expected = {"validate": "pass", "iis1": "pass", "iis2": "pass", "iis3": "pass",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": False}
    return CatalogEntry("vector_bundle_shear", data, expected, fibration=(2, 1))


def vector_bundle_exp():
    """Rank-2 bundle over R^2 with leafwise Christoffel symbol x2; the flat frame is exp(-x1 x2)."""
    alg = abelian_algebroid(2, 2)
    data = IISData(alg, 1, 1, ([["x2"]],))
    expected = {"validate": "pass", "iis1": "pass", "iis2": "truncated", "iis3": "truncated",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": False}
    return CatalogEntry("vector_bundle_exp", data, expected, fibration=(1, 1))


def tangent_sheared():
    """TR^3, J = span{d_1}, F_M = span{d_1, d_2}, a connection violating (iis2) and (iis3)."""
    alg = tangent_algebroid(3)
    data = IISData(alg, 2, 1, ([[0, 0], [0, 0]], [[0, 0], [1, 0]]), [[1, 0], ["-x2", 1]])
    expected = {"validate": "pass", "iis1": "pass", "iis2": "fail", "iis3": "fail",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": False}
    return CatalogEntry("tangent_sheared", data, expected, fibration=(1, 1))


def tangent_leafwise_shear():
    """TR^3, J = F_M = span{d_1}, a flat leafwise connection that breaks (iis1)."""
    alg = tangent_algebroid(3)
    data = IISData(alg, 1, 1, ([[0, 0], [1, 0]],), [[1, 0], ["-x1", 1]])
    expected = {"validate": "pass", "iis1": "fail", "iis2": "fail", "iis3": "fail",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": True}
    return CatalogEntry("tangent_leafwise_shear", data, expected, fibration=(1, 1))


def heisenberg_action_algebroid():
    """Heisenberg group acting on R^3 by e1 -> d_1, e2 -> d_2, e3 -> d_3 + x2 d_1; [e2, e3] = e1."""
    return ChartAlgebroid.build(3, 3, [[1, 0, "x2"], [0, 1, 0], [0, 0, 1]], {(1, 2): {0: 1}})


def heisenberg_action():
    alg = heisenberg_action_algebroid()
    data = IISData(alg, 1, 1, ([[0, 0], [0, 0]],), [[1, 0], [0, 1]])
    expected = {"validate": "pass", "iis1": "pass", "iis2": "pass", "iis3": "pass",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": True}
    return CatalogEntry("heisenberg_action", data, expected, fibration=(1, 1))


def heisenberg_action_twisted():
    alg = heisenberg_action_algebroid()
    data = IISData(alg, 2, 1, ([[0, 0], [0, 0]], [[0, 1], [0, 0]]), [[1, "-x2"], [0, 1]])
    expected = {"validate": "pass", "iis1": "pass", "iis2": "pass", "iis3": "pass",
                "fibration": "fibered", "atiyah_iis": "vanishes", "rho_j_is_f_m": False}
    return CatalogEntry("heisenberg_action_twisted", data, expected, fibration=(1, 1))


def chart_entries():
    entries = [tangent_bott(n, p) for n, p in ((2, 1), (1, 1), (3, 2), (3, 1))]
    aff = action_aff1_line()
    entries += [aff, *aff.variants.values()]
    entries += [
        action_aff1_plane(),
        vector_bundle_shear(),
        vector_bundle_exp(),
        tangent_sheared(),
        tangent_leafwise_shear(),
        heisenberg_action(),
        heisenberg_action_twisted(),
    ]
    return entries


def all_entries():
    return point_pairs() + chart_entries()


def get_entry(name):
    for entry in all_entries():
        if entry.name == name:
            return entry
    raise InputError(f"unknown catalog entry {name!r}")


def evaluate_entry(entry: CatalogEntry):
    """Recompute the verdicts named in ``entry.expected``."""
    if entry.kind == "point":
        pair = entry.payload
        verdict = atiyah_class_decide(pair)
        return {"naive_ideal": naive_ideal_check(pair), "atiyah": "vanishes" if verdict.vanishes else "nonzero"}
    data = entry.payload
    report = validate_iis_data(data)
    out = {"validate": "pass" if report.ok else "fail"}
    check = check_iis(data)
    out.update(iis1=check.iis1, iis2=check.iis2, iis3=check.iis3)
    out["rho_j_is_f_m"] = anchor_spans_leaves(data)
    if entry.fibration is not None:
        fib = make_coordinate_fibration(entry.fibration_alg or data.alg, *entry.fibration)
        out["fibration"] = "fibered" if fib.fibered else "not_fibered"
    omega = atiyah_cocycle_iis(data, construct_extension_chart(data))
    out["atiyah_iis"] = "vanishes" if primitive_search(data, omega).found else "none_up_to_degree"
    return out


# -- nonvanishing search ----------------------------------------------------------


def _bareiss_rank(rows):
    """Rank by fraction-free elimination on an integer copy of the rows."""
    mat = []
    for row in rows:
        den = 1
        for v in row:
            den = lcm(den, Fraction(v).denominator)
        mat.append([int(Fraction(v) * den) for v in row])
    if not mat:
        return 0
    nrows, ncols = len(mat), len(mat[0])
    rank, prev = 0, 1
    for col in range(ncols):
        pivot = next((i for i in range(rank, nrows) if mat[i][col]), None)
        if pivot is None:
            continue
        mat[rank], mat[pivot] = mat[pivot], mat[rank]
        p = mat[rank][col]
        for i in range(rank + 1, nrows):
            for j in range(col + 1, ncols):
                mat[i][j] = (mat[i][j] * p - mat[i][col] * mat[rank][j]) // prev
            mat[i][col] = 0
        prev = p
        rank += 1
        if rank == nrows:
            break
    return rank


def independent_rank_check(pair, omega):
    """True when rank [A | b] > rank A for the coboundary system, by Bareiss elimination."""
    system = coboundary_system(pair, omega)
    dense = system.dense()
    augmented = [row + [rhs] for row, rhs in zip(dense, system.rhs)]
    return _bareiss_rank(augmented) > _bareiss_rank(dense)


def _jacobi_constraints(dim, slots):
    """Group Jacobi component equations by the last free slot they involve."""
    index = {s: t for t, s in enumerate(slots)}
    groups = {}
    for i, j, k in combinations(range(dim), 3):
        for l in range(dim):
            used = set()
            for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
                for s in range(dim):
                    used.add(_slot(x, y, s))
                    used.add(_slot(s, z, l))
            involved = [index[u[0]] for u in used if u[0] in index]
            last = max(involved, default=-1)
            groups.setdefault(last, []).append((i, j, k, l))
    return groups


def _slot(i, j, k):
    """Canonical free slot for c[i][j][k] and the sign relating them."""
    if i == j:
        return (None, 0)
    if i < j:
        return ((i, j, k), 1)
    return ((j, i, k), -1)


def _jacobi_component(values, dim, i, j, k, l):
    def c(a, b, s):
        key, sign = _slot(a, b, s)
        return sign * values.get(key, 0) if key else 0

    total = 0
    for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
        for s in range(dim):
            total += c(x, y, s) * c(s, z, l)
    return total


def _search_dim(dim, q, coeffs):
    slots = [(i, j, k) for i, j in combinations(range(dim), 2) for k in range(dim)
             if not (j < q and k >= q)]
    groups = _jacobi_constraints(dim, slots)
    values = {}

    def visit(t):
        if t == len(slots):
            yield dict(values)
            return
        for v in coeffs:
            if v:
                values[slots[t]] = v
            else:
                values.pop(slots[t], None)
            if all(_jacobi_component(values, dim, *eq) == 0 for eq in groups.get(t, ())):
                yield from visit(t + 1)
        values.pop(slots[t], None)

    for eq in groups.get(-1, ()):
        if _jacobi_component(values, dim, *eq):
            return
    for assignment in visit(0):
        brackets = {}
        for (i, j, k), v in assignment.items():
            brackets.setdefault((i, j), {})[k] = v
        yield _pair(dim, q, brackets)


def search_nonvanishing_pair(max_dim, coeff_set):
    """First Lie pair with nonvanishing Atiyah class in a fixed enumeration.

    Dimensions run upward from 2 and q from 1 to dim - 1; for each, the free
    structure constants c[i][j][k] with i < j (those not forced to vanish by
    closure of J) take values from ``coeff_set`` in increasing order, earlier
    slots varying slowest.  Assignments violating the Jacobi identity are cut
    as soon as the offending component is fully assigned.  Returns None when
    the space is exhausted.
    """
    if max_dim > 5:
        raise InputError("search is limited to dimension 5")
    coeffs = tuple(sorted({as_rational(v) for v in coeff_set}))
    for dim in range(2, max_dim + 1):
        for q in range(1, dim):
            hit = _first_hit(dim, q, coeffs)
            if hit is not None:
                return hit
    return None


@lru_cache(maxsize=None)
def _first_hit(dim, q, coeffs):
    for pair in _search_dim(dim, q, coeffs):
        if not closure_report(pair).ok:
            continue
        verdict = atiyah_class_decide(pair)
        if verdict.vanishes:
            continue
        if not independent_rank_check(pair, verdict.cocycle):
            raise ConsistencyError("independent rank computation disagrees with the solver")
        return CatalogEntry(
            f"search_dim{dim}_q{q}", pair,
            {"naive_ideal": naive_ideal_check(pair), "atiyah": "nonzero"},
            certificate=verdict.certificate,
        )
    return None
