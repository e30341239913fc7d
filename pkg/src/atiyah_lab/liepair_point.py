"""Lie pairs over a point.

A Lie pair over a point is a finite-dimensional Lie algebra g with a
subalgebra J.  Bases are adapted: J is spanned by the first ``q`` basis
vectors and the classes of the remaining ``n - q`` vectors form the quotient
basis of g/J.  All indices in this module are 0-based; quotient indices are
local (0 is the class of e_q).

The Bott representation of J on g/J is taken as j . [a] = [[j, a]].
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, product

from .errors import ConsistencyError, InputError, PreconditionError, UnsupportedDegreeError
from .exactcore import InconsistentSystemError, Matrix, SparseSystem, as_rational
from .validation import ValidationReport

ZERO = Fraction(0)


def _tensor3(n, m, k, fill=ZERO):
    return tuple(tuple(tuple(fill for _ in range(k)) for _ in range(m)) for _ in range(n))


def _freeze3(arr):
    return tuple(tuple(tuple(as_rational(v) for v in row) for row in plane) for plane in arr)


@dataclass(frozen=True)
class LieAlgebraData:
    """Structure constants: [e_i, e_j] = sum_k c[i][j][k] e_k."""

    dim: int
    c: tuple

    def __post_init__(self):
        n = self.dim
        c = _freeze3(self.c)
        if len(c) != n or any(len(p) != n or any(len(r) != n for r in p) for p in c):
            raise InputError(f"structure constants must have shape ({n}, {n}, {n})")
        object.__setattr__(self, "c", c)

    @classmethod
    def from_brackets(cls, dim, brackets):
        """Build from {(i, j): {k: coeff}} filling in [e_j, e_i] = -[e_i, e_j]."""
        c = [[[ZERO] * dim for _ in range(dim)] for _ in range(dim)]
        for (i, j), coeffs in brackets.items():
            if not (0 <= i < dim and 0 <= j < dim):
                raise InputError(f"bracket index ({i}, {j}) out of range")
            for k, v in coeffs.items():
                if not 0 <= k < dim:
                    raise InputError(f"bracket output index {k} out of range")
                v = as_rational(v)
                c[i][j][k] = v
                c[j][i][k] = -v
        return cls(dim, c)

    @classmethod
    def abelian(cls, dim):
        return cls(dim, _tensor3(dim, dim, dim))

    def bracket(self, x, y):
        n = self.dim
        out = [ZERO] * n
        for i in range(n):
            if not x[i]:
                continue
            for j in range(n):
                if not y[j]:
                    continue
                f = x[i] * y[j]
                cij = self.c[i][j]
                for k in range(n):
                    if cij[k]:
                        out[k] += f * cij[k]
        return out

    def basis(self, i):
        v = [ZERO] * self.dim
        v[i] = Fraction(1)
        return v

    def jacobiator(self, i, j, k):
        e = self.basis
        terms = (
            self.bracket(self.bracket(e(i), e(j)), e(k)),
            self.bracket(self.bracket(e(j), e(k)), e(i)),
            self.bracket(self.bracket(e(k), e(i)), e(j)),
        )
        return [a + b + c for a, b, c in zip(*terms)]


@dataclass(frozen=True)
class LiePairPoint:
    g: LieAlgebraData
    q: int

    def __post_init__(self):
        if not 0 <= self.q <= self.g.dim:
            raise InputError(f"subalgebra rank q={self.q} outside 0..{self.g.dim}")

    @property
    def n(self):
        return self.g.dim

    @property
    def m(self):
        """Dimension of the quotient g/J."""
        return self.g.dim - self.q


@dataclass(frozen=True)
class PointConnection:
    """gamma[a][b][k]: the e_k component of nabla_{e_a} e_b."""

    gamma: tuple

    def __post_init__(self):
        object.__setattr__(self, "gamma", _freeze3(self.gamma))

    def matrix(self, a):
        """Matrix of nabla_{e_a}: column b holds the components of nabla_{e_a} e_b."""
        g = self.gamma[a]
        n = len(g)
        return Matrix([[g[b][k] for b in range(n)] for k in range(n)], zero=ZERO, cols=n)


@dataclass(frozen=True)
class CEForm:
    """A J-cochain with values in Hom(g/J, End(g/J)).

    ``values`` maps strictly increasing tuples of J-indices of length
    ``degree`` to an m x m x m array T with T[c][a][b] the c-th component of
    phi(class e_a)(class e_b).
    """

    degree: int
    values: dict

    def __eq__(self, other):
        if not isinstance(other, CEForm):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def is_zero(self):
        return all(v == ZERO for t in self.values.values() for p in t for r in p for v in r)

    def __sub__(self, other):
        if self.degree != other.degree or self.values.keys() != other.values.keys():
            raise InputError("forms of different shape")
        return CEForm(self.degree, {k: _sub3(self.values[k], other.values[k]) for k in self.values})

    def __add__(self, other):
        if self.degree != other.degree or self.values.keys() != other.values.keys():
            raise InputError("forms of different shape")
        return CEForm(self.degree, {k: _add3(self.values[k], other.values[k]) for k in self.values})


def _sub3(x, y):
    return tuple(tuple(tuple(a - b for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2)) for p1, p2 in zip(x, y))


def _add3(x, y):
    return tuple(tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(p1, p2)) for p1, p2 in zip(x, y))


def zero_form(pair, degree):
    m = pair.m
    return CEForm(degree, {key: _tensor3(m, m, m) for key in combinations(range(pair.q), degree)})


def form_from_array(pair, degree, arrays):
    return CEForm(degree, {key: _freeze3(arrays[key]) for key in combinations(range(pair.q), degree)})


# -- validation ---------------------------------------------------------------


def validate_lie_algebra(g: LieAlgebraData) -> ValidationReport:
    report = ValidationReport("lie_algebra")
    n = g.dim
    for i in range(n):
        for j in range(i, n):
            for k in range(n):
                if g.c[i][j][k] != -g.c[j][i][k]:
                    report.add("antisymmetry", indices=[i + 1, j + 1, k + 1])
    for i, j, k in combinations(range(n), 3):
        jac = g.jacobiator(i, j, k)
        if any(jac):
            report.add("jacobi", indices=[i + 1, j + 1, k + 1], value=[str(v) for v in jac])
    return report


def closure_report(pair: LiePairPoint) -> ValidationReport:
    report = ValidationReport("subalgebra")
    c, q, n = pair.g.c, pair.q, pair.n
    for i in range(q):
        for j in range(q):
            for k in range(q, n):
                if c[i][j][k]:
                    report.add("closure", indices=[i + 1, j + 1, k + 1])
    return report


def validate_pair(pair: LiePairPoint) -> ValidationReport:
    return validate_lie_algebra(pair.g).extend(closure_report(pair))


def _require_valid(pair):
    report = validate_pair(pair)
    if not report.ok:
        first = report.violations[0]
        raise InputError(f"invalid Lie pair: {first['kind']} violated at {first['indices']}")


# -- Bott representation and extensions -----------------------------------------


def bott_rep(pair: LiePairPoint):
    """Matrices B_j (j < q) of the Bott action on g/J in the quotient basis."""
    _require_valid(pair)
    mats = _bott_matrices(pair)
    c, q = pair.g.c, pair.q
    for i, j in combinations(range(q), 2):
        lhs = Matrix.zeros(pair.m, pair.m)
        for k in range(q):
            if c[i][j][k]:
                lhs = lhs + mats[k].scale(c[i][j][k])
        if lhs != mats[i].commutator(mats[j]):
            raise ConsistencyError(f"Bott representation not flat on ({i + 1}, {j + 1})")
    return mats


def _bott_matrices(pair):
    c, q, n = pair.g.c, pair.q, pair.n
    return [
        Matrix([[c[j][b][k] for b in range(q, n)] for k in range(q, n)], zero=ZERO, cols=pair.m)
        for j in range(q)
    ]


def construct_default_extension(pair: LiePairPoint) -> PointConnection:
    """Split extension: nabla_{e_j} e_b is the lifted Bott action, all else 0."""
    _require_valid(pair)
    n, q, c = pair.n, pair.q, pair.g.c
    gamma = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
    for j in range(q):
        for b in range(q, n):
            for k in range(q, n):
                gamma[j][b][k] = c[j][b][k]
    return PointConnection(gamma)


def is_point_extension(pair: LiePairPoint, conn: PointConnection) -> ValidationReport:
    n, q, c, gamma = pair.n, pair.q, pair.g.c, conn.gamma
    if len(gamma) != n or any(len(p) != n or any(len(r) != n for r in p) for p in gamma):
        raise InputError("connection shape does not match the Lie algebra")
    report = ValidationReport("extension")
    for a in range(n):
        for j in range(q):
            for k in range(q, n):
                if gamma[a][j][k]:
                    report.add("preserves_J", indices=[a + 1, j + 1, k + 1])
    for j in range(q):
        for b in range(q, n):
            for k in range(q, n):
                if gamma[j][b][k] != c[j][b][k]:
                    report.add("restricts_to_bott", indices=[j + 1, b + 1, k + 1])
    return report


def point_curvature(pair, conn, x, y):
    """Matrix of R(e_x, e_y) = [nabla_x, nabla_y] - nabla_[e_x, e_y]."""
    gx, gy = conn.matrix(x), conn.matrix(y)
    out = gx @ gy - gy @ gx
    cxy = pair.g.c[x][y]
    for k in range(pair.n):
        if cxy[k]:
            out = out - conn.matrix(k).scale(cxy[k])
    return out


def atiyah_cocycle_point(pair: LiePairPoint, conn: PointConnection) -> CEForm:
    report = is_point_extension(pair, conn)
    if not report.ok:
        raise PreconditionError(f"connection is not an extension of the Bott connection: {report.violations[0]}")
    q, n, m = pair.q, pair.n, pair.m
    values = {}
    for j in range(q):
        arr = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
        for a in range(q, n):
            r = point_curvature(pair, conn, j, a)
            for b in range(q, n):
                for cc in range(q, n):
                    arr[cc - q][a - q][b - q] = r[cc, b]
        values[(j,)] = _freeze3(arr)
    return CEForm(1, values)


# -- Chevalley-Eilenberg differential -----------------------------------------------


def _hom_action(bmat, phi, m):
    """(nabla^Hom_j phi)[c][a][b] for the Bott matrix of j."""
    out = [[[ZERO] * m for _ in range(m)] for _ in range(m)]
    B = bmat.entries
    for c in range(m):
        for a in range(m):
            for b in range(m):
                acc = ZERO
                for d in range(m):
                    if B[c][d]:
                        acc += B[c][d] * phi[d][a][b]
                    if B[d][a]:
                        acc -= phi[c][d][b] * B[d][a]
                    if B[d][b]:
                        acc -= phi[c][a][d] * B[d][b]
                out[c][a][b] = acc
    return out


def ce_differential(pair: LiePairPoint, form: CEForm) -> CEForm:
    m, q, c = pair.m, pair.q, pair.g.c
    bmats = _bott_matrices(pair)
    if form.degree == 0:
        phi = form.values[()]
        return CEForm(1, {(j,): _freeze3(_hom_action(bmats[j], phi, m)) for j in range(q)})
    if form.degree == 1:
        values = {}
        for j1, j2 in combinations(range(q), 2):
            t1 = _hom_action(bmats[j1], form.values[(j2,)], m)
            t2 = _hom_action(bmats[j2], form.values[(j1,)], m)
            arr = [[[t1[x][y][z] - t2[x][y][z] for z in range(m)] for y in range(m)] for x in range(m)]
            for k in range(q):
                f = c[j1][j2][k]
                if f:
                    w = form.values[(k,)]
                    for x, y, z in product(range(m), repeat=3):
                        arr[x][y][z] -= f * w[x][y][z]
            values[(j1, j2)] = _freeze3(arr)
        return CEForm(2, values)
    raise UnsupportedDegreeError(f"differential implemented for degrees 0 and 1, got {form.degree}")


# -- deciding the Atiyah class ------------------------------------------------------


@dataclass(frozen=True)
class AtiyahVerdict:
    """Outcome of the exact decision procedure.

    Exactly one of ``primitive`` (a 0-form phi with d phi = omega) and
    ``certificate`` (a Fredholm witness) is set.
    """

    vanishes: bool
    cocycle: CEForm
    primitive: CEForm = None
    certificate: dict = None


def coboundary_system(pair, omega):
    """The linear system d phi = omega in the entries of a 0-form phi.

    Assembled directly from the Bott matrices, independently of
    :func:`ce_differential`.  Unknown u = (c*m + a)*m + b stands for
    phi[c][a][b]; equation labels are (j, c, a, b).
    """
    m, q = pair.m, pair.q
    bmats = _bott_matrices(pair)
    system = SparseSystem(m ** 3)

    def unk(c, a, b):
        return (c * m + a) * m + b

    for j in range(q):
        B = bmats[j].entries
        w = omega.values[(j,)]
        for c, a, b in product(range(m), repeat=3):
            label = (j, c, a, b)
            system.set_rhs(label, w[c][a][b])
            for d in range(m):
                system.add(label, unk(d, a, b), B[c][d])
                system.add(label, unk(c, d, b), -B[d][a])
                system.add(label, unk(c, a, d), -B[d][b])
    return system


def atiyah_class_decide(pair: LiePairPoint, conn: PointConnection = None) -> AtiyahVerdict:
    """Decide whether the Atiyah class of the pair vanishes.

    Uses the default extension unless ``conn`` is given; the verdict does not
    depend on that choice.
    """
    _require_valid(pair)
    if conn is None:
        conn = construct_default_extension(pair)
    omega = atiyah_cocycle_point(pair, conn)
    if not ce_differential(pair, omega).is_zero():
        raise ConsistencyError("Atiyah cocycle is not closed")
    m = pair.m
    system = coboundary_system(pair, omega)
    try:
        x = system.solve()
    except InconsistentSystemError as exc:
        y = exc.certificate
        _verify_certificate(system, y)
        entries = [
            {"index": [lab[0] + 1, lab[1] + pair.q + 1, lab[2] + pair.q + 1, lab[3] + pair.q + 1], "value": v}
            for lab, v in zip(system.labels, y)
            if v
        ]
        return AtiyahVerdict(False, omega, certificate={"y": y, "labels": list(system.labels), "entries": entries})
    phi = [[[x[(c * m + a) * m + b] for b in range(m)] for a in range(m)] for c in range(m)]
    primitive = CEForm(0, {(): _freeze3(phi)})
    if ce_differential(pair, primitive) != omega:
        raise ConsistencyError("primitive does not reproduce the Atiyah cocycle")
    return AtiyahVerdict(True, omega, primitive=primitive)


def _verify_certificate(system, y):
    yA = [ZERO] * system.nunknowns
    yb = ZERO
    for yi, row, rhs in zip(y, system.rows, system.rhs):
        if yi:
            yb += yi * rhs
            for j, v in row.items():
                yA[j] += yi * v
    if any(yA) or not yb:
        raise ConsistencyError("Fredholm certificate does not verify")


def naive_ideal_check(pair: LiePairPoint) -> bool:
    """True when J is an ideal: [e_a, e_i] has no quotient component for i < q."""
    c, q, n = pair.g.c, pair.q, pair.n
    return all(not c[a][i][k] for a in range(n) for i in range(q) for k in range(q, n))


def point_extension_difference(pair: LiePairPoint, conn1: PointConnection, conn2: PointConnection) -> CEForm:
    """The 0-form [a] (x) [b] -> [nabla1_a b - nabla2_a b] on g/J.

    Well defined because both connections preserve J and induce the Bott
    action along J; both facts are checked.
    """
    q, n, m = pair.q, pair.n, pair.m
    for conn in (conn1, conn2):
        report = is_point_extension(pair, conn)
        if not report.ok:
            raise PreconditionError(f"not an extension: {report.violations[0]}")
    g1, g2 = conn1.gamma, conn2.gamma
    arr = [[[g1[a + q][b + q][c + q] - g2[a + q][b + q][c + q] for b in range(m)] for a in range(m)] for c in range(m)]
    for j in range(q):
        for b in range(n):
            for k in range(q, n):
                if g1[j][b][k] != g2[j][b][k] and b >= q:
                    raise ConsistencyError("difference of extensions is not basic along J")
    return CEForm(0, {(): _freeze3(arr)})
