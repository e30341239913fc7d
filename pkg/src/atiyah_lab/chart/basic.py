"""The basic A-connection, the Lie pair cocycle over a chart, and rho^*.

An A-connection is stored by its frame table: matrices B_i with
nabla_{e_i} s = rho(e_i)(s) + B_i s for a section s given by frame
components.  Pair forms use the point-case layout (see
:class:`atiyah_lab.liepair_point.CEForm`) with polynomial entries.
"""

from itertools import combinations, product

from ..errors import InputError, PreconditionError, UnsupportedDegreeError
from ..exactcore import Matrix, Poly
from ..liepair_point import CEForm
from ..validation import ValidationReport
from .algebroid import ChartAlgebroid, apply_vector_field, validate_chart_algebroid
from .cocycles import FullConnection, IISForm
from .iis import IISData


class PairForm(CEForm):
    """J-cochain with values in Hom(A/J, End(A/J)) and polynomial coefficients."""


def basic_connection(alg: ChartAlgebroid, conn: FullConnection):
    """(B_i)[k][j] = C_ij^k + sum_mu rho(e_j)^mu (Gamma_mu)[k][i]."""
    n, r = alg.nvars, alg.rank
    if len(conn.christoffel_full) != n or any(g.shape != (r, r) for g in conn.christoffel_full):
        raise InputError(f"connection must consist of {n} matrices of size {r}x{r}")
    report = validate_chart_algebroid(alg)
    if not report.ok:
        raise PreconditionError(f"invalid algebroid: {report.violations[0]['kind']}")
    tables = []
    for i in range(r):
        rows = []
        for k in range(r):
            row = []
            for j in range(r):
                acc = alg.structfn[i][j][k]
                for mu in range(n):
                    a = alg.anchor[mu, j]
                    if a:
                        g = conn[mu][k, i]
                        if g:
                            acc = acc + a * g
                row.append(acc)
            rows.append(row)
        tables.append(Matrix(rows, zero=alg.zero, cols=r))
    return tuple(tables)


def _vector_field_on_matrix(field, mat):
    return mat.map(lambda f: apply_vector_field(field, f))


def a_curvature(alg: ChartAlgebroid, tables, i, a):
    """R(e_i, e_a) = rho_i(B_a) - rho_a(B_i) + [B_i, B_a] - sum_k C_ia^k B_k."""
    bi, ba = tables[i], tables[a]
    out = (
        _vector_field_on_matrix(alg.anchor_column(i), ba)
        - _vector_field_on_matrix(alg.anchor_column(a), bi)
        + bi.commutator(ba)
    )
    for k in range(alg.rank):
        f = alg.structfn[i][a][k]
        if f:
            out = out - tables[k].map(lambda x, f=f: x * f)
    return out


def j_preservation_report(alg: ChartAlgebroid, q, tables) -> ValidationReport:
    """nabla_{e_i} e_j stays in J for every i and every j < q."""
    report = ValidationReport("j_preservation")
    for i, t in enumerate(tables):
        for k in range(q, alg.rank):
            for j in range(q):
                if t[k, j]:
                    report.add("preserves_J", indices=[i + 1, j + 1], component=k + 1, value=str(t[k, j]))
    return report


def bott_restriction_report(alg: ChartAlgebroid, q, tables) -> ValidationReport:
    """Along J the induced quotient connection is the Bott connection [j, a] mod J."""
    report = ValidationReport("bott_restriction")
    for j in range(q):
        for a in range(q, alg.rank):
            for c in range(q, alg.rank):
                if tables[j][c, a] != alg.structfn[j][a][c]:
                    report.add("bott", indices=[j + 1, a + 1], component=c + 1)
    return report


def pair_cocycle_from_tables(alg: ChartAlgebroid, q, tables) -> PairForm:
    report = j_preservation_report(alg, q, tables)
    if not report.ok:
        raise PreconditionError(f"A-connection does not preserve J: {report.violations[0]}")
    r, m = alg.rank, alg.rank - q
    values = {}
    for j in range(q):
        planes = [[[None] * m for _ in range(m)] for _ in range(m)]
        for a in range(m):
            curv = a_curvature(alg, tables, j, q + a)
            for c, b in product(range(m), repeat=2):
                planes[c][a][b] = curv[q + c, q + b]
        values[(j,)] = _freeze(planes)
    return PairForm(1, values)


def pair_cocycle(alg: ChartAlgebroid, q, conn: FullConnection) -> PairForm:
    """Atiyah cocycle of the Lie pair for the basic connection of ``conn``."""
    if not 0 <= q <= alg.rank:
        raise InputError(f"q = {q} outside 0..{alg.rank}")
    return pair_cocycle_from_tables(alg, q, basic_connection(alg, conn))


def _freeze(planes):
    return tuple(tuple(tuple(row) for row in plane) for plane in planes)


def _zero_planes(alg, m):
    z = alg.zero
    return [[[z] * m for _ in range(m)] for _ in range(m)]


def zero_pair_form(alg: ChartAlgebroid, q, degree):
    m = alg.rank - q
    return PairForm(degree, {k: _freeze(_zero_planes(alg, m)) for k in combinations(range(q), degree)})


# -- differential --------------------------------------------------------------


def _hom_action(alg, q, j, phi):
    """(nabla^Hom_{e_j} phi)[c][a][b] with the Bott connection of e_j on A/J."""
    m = alg.rank - q
    sf = alg.structfn[j]
    field = alg.anchor_column(j)
    bott = [[sf[q + b][q + c] for b in range(m)] for c in range(m)]
    out = _zero_planes(alg, m)
    for c, a, b in product(range(m), repeat=3):
        acc = apply_vector_field(field, phi[c][a][b])
        for d in range(m):
            if bott[c][d]:
                acc = acc + bott[c][d] * phi[d][a][b]
            if bott[d][a]:
                acc = acc - phi[c][d][b] * bott[d][a]
            if bott[d][b]:
                acc = acc - phi[c][a][d] * bott[d][b]
        out[c][a][b] = acc
    return out


def d_pair(alg: ChartAlgebroid, q, form: PairForm) -> PairForm:
    """Chevalley-Eilenberg differential of J with coefficients in Hom(A/J, End(A/J))."""
    m = alg.rank - q
    if form.degree == 0:
        phi = form.values[()]
        return PairForm(1, {(j,): _freeze(_hom_action(alg, q, j, phi)) for j in range(q)})
    if form.degree == 1:
        values = {}
        for j1, j2 in combinations(range(q), 2):
            t1 = _hom_action(alg, q, j1, form.values[(j2,)])
            t2 = _hom_action(alg, q, j2, form.values[(j1,)])
            out = _zero_planes(alg, m)
            for x, y, z in product(range(m), repeat=3):
                acc = t1[x][y][z] - t2[x][y][z]
                for k in range(q):
                    f = alg.structfn[j1][j2][k]
                    if f:
                        acc = acc - f * form.values[(k,)][x][y][z]
                out[x][y][z] = acc
            values[(j1, j2)] = _freeze(out)
        return PairForm(2, values)
    raise UnsupportedDegreeError(f"differential implemented for degrees 0 and 1, got {form.degree}")


# -- rho^* ------------------------------------------------------------------------


def rho_star(alg: ChartAlgebroid, data: IISData, omega: IISForm) -> PairForm:
    """Pull an iis form back to the Lie pair through the anchor.

    (rho^* omega)(j_1..j_k)(a1)(a2) = omega(rho j_1..rho j_k)(class rho(a2))(a1);
    only leaf components of rho(j) and transverse components of rho(a2)
    contribute.
    """
    if alg is not data.alg and alg != data.alg:
        raise InputError("iis data belongs to a different algebroid")
    n, p, q, r = data.n, data.p, data.q, data.r
    m = r - q
    for nu in data.transverse:
        for i in range(q):
            if alg.anchor[nu, i]:
                raise InputError(f"rho(e{i + 1}) is not tangent to F_M (component x{nu + 1})")
    k = omega.degree
    if k > 2:
        raise UnsupportedDegreeError(f"rho^* implemented up to degree 2, got {k}")
    values = {}
    for jkey in combinations(range(q), k):
        out = _zero_planes(alg, m)
        for mukey in combinations(range(p), k):
            weight = _leaf_weight(alg, jkey, mukey)
            if not weight:
                continue
            mats = omega.values[mukey]
            for idx, nu in enumerate(range(p, n)):
                mat = mats[idx]
                if mat.is_zero():
                    continue
                for a2 in range(m):
                    t = alg.anchor[nu, q + a2]
                    if not t:
                        continue
                    f = weight * t
                    for c, a1 in product(range(m), repeat=2):
                        v = mat[c, a1]
                        if v:
                            out[c][a1][a2] = out[c][a1][a2] + f * v
        values[jkey] = _freeze(out)
    return PairForm(k, values)


def _leaf_weight(alg, jkey, mukey):
    """Determinant of the anchor minor rows mukey, columns jkey."""
    if not jkey:
        return Poly.const(alg.nvars, 1)
    if len(jkey) == 1:
        return alg.anchor[mukey[0], jkey[0]]
    (j1, j2), (m1, m2) = jkey, mukey
    a = alg.anchor
    return a[m1, j1] * a[m2, j2] - a[m2, j1] * a[m1, j2]
