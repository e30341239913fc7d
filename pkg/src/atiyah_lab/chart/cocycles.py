"""Extensions of the partial connection and the Atiyah cocycle of an iis.

Forms here live in Omega^k(F_M, Hom(TM/F_M, End(A/J))).  In the coordinate
frame a k-form is a map from increasing k-tuples of leaf directions mu < p to
a tuple of m x m matrices, one per transverse direction nu >= p:
values[(mu,)][nu - p] is omega(d_mu)(class d_nu).
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from ..errors import ConsistencyError, InputError, PreconditionError, UnsupportedDegreeError
from ..exactcore import InconsistentSystemError, Matrix, Poly, SparseSystem, monomials_up_to
from ..validation import ValidationReport
from .algebroid import poly_matrix
from .iis import IISData, flatness_matrix, require_valid, zero_matrix


@dataclass(frozen=True)
class FullConnection:
    """A TM-connection on A: nabla_{d_mu} e_b = sum_c christoffel_full[mu][c][b] e_c."""

    christoffel_full: tuple

    def __post_init__(self):
        gammas = tuple(self.christoffel_full)
        if gammas and not all(isinstance(g, Matrix) for g in gammas):
            raise InputError("connection matrices must be Matrix instances")
        object.__setattr__(self, "christoffel_full", gammas)

    @classmethod
    def from_rows(cls, nvars, rank, matrices):
        return cls(tuple(poly_matrix(g, nvars, rank) for g in matrices))

    def __getitem__(self, mu):
        return self.christoffel_full[mu]


def _check_shape(data: IISData, conn: FullConnection):
    n, r = data.n, data.r
    if len(conn.christoffel_full) != n:
        raise InputError(f"connection needs {n} matrices, got {len(conn.christoffel_full)}")
    for g in conn.christoffel_full:
        if g.shape != (r, r):
            raise InputError(f"connection matrices must be {r}x{r}, got {g.shape}")


def quotient_block(data: IISData, mat: Matrix) -> Matrix:
    rng = range(data.q, data.r)
    return mat.block(rng, rng)


def is_chart_extension(data: IISData, conn: FullConnection) -> ValidationReport:
    """(1) every nabla_{d_mu} preserves J; (2) the induced leaf-wise quotient connection is data's."""
    _check_shape(data, conn)
    report = ValidationReport("chart_extension")
    q, r = data.q, data.r
    for mu, g in enumerate(conn.christoffel_full):
        for c in range(q, r):
            for b in range(q):
                if g[c, b]:
                    report.add("preserves_J", indices=[mu + 1, c + 1, b + 1], value=str(g[c, b]))
        if mu < data.p and quotient_block(data, g) != data.christoffel[mu]:
            report.add("restricts_to_partial", indices=[mu + 1])
    return report


def assemble_connection(data: IISData, quotient, k_connection=None, mixed=None) -> FullConnection:
    """Block assembly of a full connection from per-direction blocks.

    ``quotient`` gives the (r-q)-square block for every coordinate direction;
    ``k_connection`` the q-square J-block and ``mixed`` the q x (r-q) block
    (J components of nabla e_b for b transverse).  Missing blocks are zero.
    """
    n, r, q = data.n, data.r, data.q
    zero = Poly.zero(n)
    out = []
    for mu in range(n):
        rows = [[zero] * r for _ in range(r)]
        blocks = [(quotient[mu], q, q)]
        if k_connection is not None:
            blocks.append((k_connection[mu], 0, 0))
        if mixed is not None:
            blocks.append((mixed[mu], 0, q))
        for block, r0, c0 in blocks:
            if block is None:
                continue
            if not isinstance(block, Matrix):
                block = poly_matrix(block, n, len(block[0]) if block else 0)
            for i in range(block.rows):
                for j in range(block.cols):
                    rows[r0 + i][c0 + j] = block[i, j]
        out.append(Matrix(rows, zero=zero, cols=r))
    return FullConnection(tuple(out))


def construct_extension_chart(data: IISData, transverse_quotient=None, k_connection=None) -> FullConnection:
    """Deterministic extension: leaf blocks from data, transverse quotient blocks as given (default 0)."""
    require_valid(data)
    n, p, m = data.n, data.p, data.m
    if transverse_quotient is not None and len(transverse_quotient) != n - p:
        raise InputError(f"expected {n - p} transverse quotient blocks, got {len(transverse_quotient)}")
    if k_connection is not None and len(k_connection) != n:
        raise InputError(f"expected {n} J-blocks, got {len(k_connection)}")
    quotient = list(data.christoffel)
    for k in range(n - p):
        quotient.append(transverse_quotient[k] if transverse_quotient is not None else zero_matrix(n, m))
    conn = assemble_connection(data, quotient, k_connection)
    if not is_chart_extension(data, conn).ok:
        raise ConsistencyError("assembled connection is not an extension")
    return conn


# -- forms --------------------------------------------------------------------


@dataclass(frozen=True)
class IISForm:
    degree: int
    values: dict

    def __eq__(self, other):
        if not isinstance(other, IISForm):
            return NotImplemented
        return self.degree == other.degree and self.values == other.values

    def is_zero(self):
        return all(mat.is_zero() for mats in self.values.values() for mat in mats)

    def _combine(self, other, op):
        if self.degree != other.degree or self.values.keys() != other.values.keys():
            raise InputError("forms of different shape")
        return IISForm(self.degree, {
            k: tuple(op(a, b) for a, b in zip(self.values[k], other.values[k])) for k in self.values
        })

    def __add__(self, other):
        return self._combine(other, lambda a, b: a + b)

    def __sub__(self, other):
        return self._combine(other, lambda a, b: a - b)

    def max_degree(self):
        return max((e.degree() for mats in self.values.values() for mat in mats for row in mat.entries
                    for e in row), default=-1)


def zero_iis_form(data: IISData, degree):
    z = zero_matrix(data.n, data.m)
    width = data.n - data.p
    return IISForm(degree, {key: (z,) * width for key in combinations(range(data.p), degree)})


def iis_form(data: IISData, degree, values):
    """Build a form from nested lists, checking the key set and shapes."""
    n, m, width = data.n, data.m, data.n - data.p
    keys = list(combinations(range(data.p), degree))
    if set(values) != set(keys):
        raise InputError(f"form of degree {degree} needs keys {keys}")
    out = {}
    for k in keys:
        mats = values[k]
        if len(mats) != width:
            raise InputError(f"form component {k} needs {width} transverse matrices")
        out[k] = tuple(g if isinstance(g, Matrix) else poly_matrix(g, n, m) for g in mats)
    return IISForm(degree, out)


def curvature_full(conn: FullConnection, mu, nu):
    return flatness_matrix(conn[mu], conn[nu], mu, nu)


def atiyah_cocycle_iis(data: IISData, conn: FullConnection) -> IISForm:
    """omega(d_mu)(class d_nu) = class of R(d_mu, d_nu) on A/J."""
    report = is_chart_extension(data, conn)
    if not report.ok:
        raise PreconditionError(f"not an extension: {report.violations[0]}")
    values = {}
    for mu in range(data.p):
        values[(mu,)] = tuple(quotient_block(data, curvature_full(conn, mu, nu)) for nu in data.transverse)
    return IISForm(1, values)


def extension_difference_form(data: IISData, conn1: FullConnection, conn2: FullConnection) -> IISForm:
    """The 0-form phi with omega_1 - omega_2 = d phi."""
    for conn in (conn1, conn2):
        report = is_chart_extension(data, conn)
        if not report.ok:
            raise PreconditionError(f"not an extension: {report.violations[0]}")
    q, r = data.q, data.r
    diffs = [a - b for a, b in zip(conn1.christoffel_full, conn2.christoffel_full)]
    for mu, d in enumerate(diffs):
        if any(d[c, b] for c in range(q, r) for b in range(q)):
            raise ConsistencyError(f"difference sends J out of J in direction {mu + 1}")
        if mu < data.p and not quotient_block(data, d).is_zero():
            raise ConsistencyError(f"difference is nonzero along leaf direction {mu + 1}")
    return IISForm(0, {(): tuple(quotient_block(data, diffs[nu]) for nu in data.transverse)})


def _covariant(data, mu, mat):
    """d_mu on coefficients plus the induced action of Gamma_mu on End(A/J)."""
    return mat.diff(mu) + data.christoffel[mu].commutator(mat)


def d_iis(data: IISData, form: IISForm) -> IISForm:
    """Differential of the flat F_M-connection on Hom(TM/F_M, End(A/J)).

    The Bott connection on TM/F_M is trivial in the coordinate frame, so only
    the End(A/J) slot is twisted.
    """
    p = data.p
    if form.degree == 0:
        phi = form.values[()]
        return IISForm(1, {(mu,): tuple(_covariant(data, mu, x) for x in phi) for mu in range(p)})
    if form.degree == 1:
        values = {}
        for mu, ka in combinations(range(p), 2):
            values[(mu, ka)] = tuple(
                _covariant(data, mu, a) - _covariant(data, ka, b)
                for a, b in zip(form.values[(ka,)], form.values[(mu,)])
            )
        return IISForm(2, values)
    raise UnsupportedDegreeError(f"differential implemented for degrees 0 and 1, got {form.degree}")


@dataclass(frozen=True)
class PrimitiveResult:
    """``primitive`` is None exactly when no primitive of degree <= bound exists.

    That outcome says nothing about primitives of higher degree.  For each
    transverse direction without a solution, ``certificates`` holds the
    Fredholm witness of the truncated system.
    """

    degree_bound: int
    primitive: Optional[IISForm]
    certificates: tuple = ()

    @property
    def found(self):
        return self.primitive is not None


def default_degree_bound(omega: IISForm):
    return max(4, 1 + omega.max_degree())


def primitive_search(data: IISData, omega: IISForm, degree_bound: Optional[int] = None) -> PrimitiveResult:
    if omega.degree != 1:
        raise InputError("primitive search expects a 1-form")
    if not d_iis(data, omega).is_zero():
        raise InputError("form is not closed")
    bound = default_degree_bound(omega) if degree_bound is None else degree_bound
    if bound < 0:
        raise InputError("degree bound must be non-negative")
    n, p, m = data.n, data.p, data.m
    monos = monomials_up_to(n, bound)
    width = len(monos)
    solution_mats = []
    certificates = []
    # d phi is computed separately for each transverse direction
    for idx in range(n - p):
        system = SparseSystem(m * m * width)
        for c in range(m):
            for b in range(m):
                for t, exp in enumerate(monos):
                    unknown = (c * m + b) * width + t
                    mono = Poly(n, {exp: 1})
                    for mu in range(p):
                        g = data.christoffel[mu]
                        contrib = {}
                        d = mono.diff(mu)
                        if d:
                            contrib[(c, b)] = d
                        for x in range(m):
                            if g[x, c]:
                                contrib[(x, b)] = contrib.get((x, b), Poly.zero(n)) + g[x, c] * mono
                            if g[b, x]:
                                contrib[(c, x)] = contrib.get((c, x), Poly.zero(n)) - g[b, x] * mono
                        for (x, y), poly in contrib.items():
                            for e, v in poly.terms.items():
                                system.add((mu, x, y, e), unknown, v)
        target = [omega.values[(mu,)][idx] for mu in range(p)]
        for mu in range(p):
            for x in range(m):
                for y in range(m):
                    for e, v in target[mu][x, y].terms.items():
                        system.set_rhs((mu, x, y, e), v)
        try:
            sol = system.solve()
        except InconsistentSystemError as exc:
            certificates.append({
                "transverse": p + idx + 1,
                "entries": [
                    {"equation": _label(system.labels[i]), "value": y}
                    for i, y in enumerate(exc.certificate) if y
                ],
            })
            continue
        rows = []
        for c in range(m):
            row = []
            for b in range(m):
                terms = {monos[t]: sol[(c * m + b) * width + t] for t in range(width)}
                row.append(Poly(n, terms))
            rows.append(row)
        solution_mats.append(Matrix(rows, zero=Poly.zero(n), cols=m))
    if certificates:
        return PrimitiveResult(bound, None, tuple(certificates))
    phi = IISForm(0, {(): tuple(solution_mats)})
    if d_iis(data, phi) != omega:
        raise ConsistencyError("primitive search returned a non-primitive")
    return PrimitiveResult(bound, phi)


def _label(label):
    mu, x, y, exp = label
    return {"direction": mu + 1, "row": x + 1, "column": y + 1, "monomial": list(exp)}
