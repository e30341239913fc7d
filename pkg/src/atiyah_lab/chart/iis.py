"""Infinitesimal ideal systems in adapted coordinates.

F_M is spanned by the first ``p`` coordinate fields, J by the first ``q``
frame sections, and the flat F_M-connection on A/J is given by one
(r - q) x (r - q) Christoffel matrix per leaf direction:
nabla_{d/dx_mu} [e_{q+b}] = sum_c christoffel[mu][c][b] [e_{q+c}].
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from ..errors import InputError, PreconditionError
from ..exactcore import Matrix, Poly, determinant, maximal_minors
from ..validation import ValidationReport
from .algebroid import ChartAlgebroid, bracket_sections, poly_matrix, validate_chart_algebroid

PASS, FAIL, TRUNCATED = "pass", "fail", "truncated"


def zero_matrix(nvars, rows, cols=None):
    return Matrix.zeros(rows, rows if cols is None else cols, Poly.zero(nvars))


def identity_matrix(nvars, size):
    return Matrix.identity(size, Poly.zero(nvars))


@dataclass(frozen=True)
class IISData:
    alg: ChartAlgebroid
    p: int
    q: int
    christoffel: tuple
    flat_frame: Optional[Matrix] = None

    def __post_init__(self):
        n, r = self.alg.nvars, self.alg.rank
        if not 0 <= self.p <= n:
            raise InputError(f"p = {self.p} outside 0..{n}")
        if not 0 <= self.q <= r:
            raise InputError(f"q = {self.q} outside 0..{r}")
        m = r - self.q
        gammas = tuple(g if isinstance(g, Matrix) else poly_matrix(g, n, m) for g in self.christoffel)
        if len(gammas) != self.p:
            raise InputError(f"expected {self.p} Christoffel matrices, got {len(gammas)}")
        for g in gammas:
            if g.shape != (m, m):
                raise InputError(f"Christoffel matrices must be {m}x{m}, got {g.shape}")
        object.__setattr__(self, "christoffel", gammas)
        frame = self.flat_frame
        if frame is not None:
            if not isinstance(frame, Matrix):
                frame = poly_matrix(frame, n, m)
            if frame.shape != (m, m):
                raise InputError(f"flat frame must be {m}x{m}, got {frame.shape}")
            object.__setattr__(self, "flat_frame", frame)

    @property
    def n(self):
        return self.alg.nvars

    @property
    def r(self):
        return self.alg.rank

    @property
    def m(self):
        """Rank of A/J."""
        return self.alg.rank - self.q

    @property
    def transverse(self):
        """Coordinate indices spanning TM/F_M."""
        return range(self.p, self.alg.nvars)


def flatness_matrix(gamma_mu, gamma_nu, mu, nu):
    """d_mu Gamma_nu - d_nu Gamma_mu + [Gamma_mu, Gamma_nu]."""
    return gamma_nu.diff(mu) - gamma_mu.diff(nu) + gamma_mu.commutator(gamma_nu)


def validate_iis_data(data: IISData) -> ValidationReport:
    """Structural invariants: algebroid axioms, rho(J) in F_M, J closed, flatness."""
    report = ValidationReport("iis_data")
    report.extend(validate_chart_algebroid(data.alg))
    alg, p, q, r = data.alg, data.p, data.q, data.r
    for nu in data.transverse:
        for i in range(q):
            if alg.anchor[nu, i]:
                report.add("anchor_J_transverse", indices=[i + 1], component=nu + 1,
                           value=str(alg.anchor[nu, i]))
    for i in range(q):
        for j in range(i + 1, q):
            for k in range(q, r):
                if alg.structfn[i][j][k]:
                    report.add("closure", indices=[i + 1, j + 1, k + 1], value=str(alg.structfn[i][j][k]))
    g = data.christoffel
    for mu in range(p):
        for nu in range(mu + 1, p):
            f = flatness_matrix(g[mu], g[nu], mu, nu)
            if not f.is_zero():
                report.add("flatness", indices=[mu + 1, nu + 1])
    return report


def require_valid(data: IISData):
    report = validate_iis_data(data)
    if not report.ok:
        first = report.violations[0]
        raise PreconditionError(f"invalid iis data: {first['kind']} at {first.get('indices')}")


def iis1_prime_report(data: IISData) -> ValidationReport:
    """class [e_j, e_b] == sum_mu rho(e_j)^mu Gamma_mu [e_b] for j in J, b transverse."""
    report = ValidationReport("iis1_prime")
    alg, p, q, m = data.alg, data.p, data.q, data.m
    for j in range(q):
        for b in range(m):
            for c in range(m):
                lhs = alg.structfn[j][q + b][q + c]
                rhs = alg.zero
                for mu in range(p):
                    a = alg.anchor[mu, j]
                    if a:
                        rhs = rhs + a * data.christoffel[mu][c, b]
                if lhs != rhs:
                    report.add("iis1", indices=[j + 1, q + b + 1], component=q + c + 1,
                               value=str(lhs - rhs))
    return report


def anchor_spans_leaves(data: IISData) -> bool:
    """Sufficient test for rho(J) = F_M on the whole chart.

    Requires rho(J) inside F_M and some p x p minor of the leaf block of the
    anchor restricted to J to be a nonzero constant.
    """
    alg, p, q = data.alg, data.p, data.q
    if any(alg.anchor[nu, i] for nu in data.transverse for i in range(q)):
        return False
    if p == 0:
        return True
    if q < p:
        return False
    block = alg.anchor.block(range(p), range(q))
    return any(d.is_constant() and d for d in maximal_minors(block))


# -- flat frames --------------------------------------------------------------


def flat_frame_report(data: IISData, frame: Matrix) -> ValidationReport:
    report = ValidationReport("flat_frame")
    for mu in range(data.p):
        residual = frame.diff(mu) + data.christoffel[mu] @ frame
        if not residual.is_zero():
            report.add("not_flat", indices=[mu + 1])
    det = determinant(frame)
    if not (det.is_constant() and det):
        report.add("not_unimodular", value=str(det))
    return report


def _leaf_degree(exp, p):
    return sum(exp[:p])


def _leaf_part(poly, p, k):
    return poly.filter_terms(lambda e: _leaf_degree(e, p) == k)


def power_series_frame(data: IISData, degree_bound: int) -> Matrix:
    """Flat frame with identity initial value, truncated at leaf degree D.

    Leaf-homogeneous pieces follow from the radial form of the flatness
    equation: k Phi_k = -sum_mu x_mu (Gamma_mu Phi)_{k-1}.
    """
    n, p, m = data.n, data.p, data.m
    pieces = {}
    for mu in range(p):
        g = data.christoffel[mu]
        for l in range(degree_bound):
            pieces[mu, l] = g.map(lambda e, l=l: _leaf_part(e, p, l))
    terms = [identity_matrix(n, m)]
    for k in range(1, degree_bound + 1):
        acc = zero_matrix(n, m)
        for mu in range(p):
            x = Poly.var(n, mu)
            inner = zero_matrix(n, m)
            for l in range(k):
                inner = inner + pieces[mu, l] @ terms[k - 1 - l]
            acc = acc + inner.scale(x)
        terms.append(acc.scale(Fraction(-1, k)))
    total = zero_matrix(n, m)
    for t in terms:
        total = total + t
    return total


def frame_sections(data: IISData, frame: Matrix):
    """Columns of the frame lifted to sections of A through span{e_q..}."""
    zero = data.alg.zero
    head = (zero,) * data.q
    return [head + frame.column(i) for i in range(frame.cols)]


def _nonzero(poly, keep):
    return bool(poly.filter_terms(keep)) if keep else bool(poly)


def iis1_direct_report(data: IISData, frame: Matrix, keep=None) -> ValidationReport:
    """[Phi_i, j] lies in J for every frame column and j in J."""
    report = ValidationReport("iis1_direct")
    alg, q = data.alg, data.q
    for i, s in enumerate(frame_sections(data, frame)):
        for j in range(q):
            br = bracket_sections(alg, s, alg.frame(j))
            for c in range(q, data.r):
                if _nonzero(br[c], keep):
                    report.add("iis1", indices=[i + 1, j + 1], component=c + 1)
    return report


def iis3_report(data: IISData, frame: Matrix, keep=None) -> ValidationReport:
    """The transverse part of rho(Phi_i) is constant along the leaves."""
    report = ValidationReport("iis3")
    for i, s in enumerate(frame_sections(data, frame)):
        field_ = data.alg.anchor_of(s)
        for nu in data.transverse:
            for mu in range(data.p):
                if _nonzero(field_[nu].diff(mu), keep):
                    report.add("iis3", indices=[i + 1], component=nu + 1, direction=mu + 1)
    return report


def iis2_report(data: IISData, frame: Matrix, keep=None) -> ValidationReport:
    """The bracket of two parallel sections is parallel.

    Exact criterion on the frame: parallel sections are Phi f with f
    constant along the leaves, and by the Leibniz rule it suffices that
    (iis1) and (iis3) hold for the frame columns and that each
    class [Phi_i, Phi_k] is parallel.
    """
    report = ValidationReport("iis2")
    report.extend(iis1_direct_report(data, frame, keep))
    report.extend(iis3_report(data, frame, keep))
    sections = frame_sections(data, frame)
    q = data.q
    for i in range(len(sections)):
        for k in range(i + 1, len(sections)):
            cls = bracket_sections(data.alg, sections[i], sections[k])[q:]
            for mu in range(data.p):
                g = data.christoffel[mu]
                moved = g.apply(cls)
                for c in range(data.m):
                    if _nonzero(cls[c].diff(mu) + moved[c], keep):
                        report.add("iis2", indices=[i + 1, k + 1], component=q + c + 1, direction=mu + 1)
    return report


@dataclass
class IISCheck:
    """Per-axiom verdicts of :func:`check_iis`.

    ``degree_bound`` is set only when the power-series frame was used; the
    verdicts "truncated" then mean that no violation was found among terms of
    leaf degree <= degree_bound - 2.
    """

    iis1: str
    iis2: str
    iis3: str
    iis1_direct: str
    frame: str
    degree_bound: Optional[int] = None
    violations: dict = field(default_factory=dict)

    def to_dict(self):
        out = {"iis1": self.iis1, "iis2": self.iis2, "iis3": self.iis3,
               "iis1_direct": self.iis1_direct, "frame": self.frame}
        if self.degree_bound is not None:
            out["degree_bound"] = self.degree_bound
        if self.violations:
            out["violations"] = self.violations
        return out

    @property
    def all_pass(self):
        return self.iis1 == self.iis2 == self.iis3 == PASS


DEFAULT_FRAME_DEGREE = 6


def check_iis(data: IISData, degree_bound: int = DEFAULT_FRAME_DEGREE) -> IISCheck:
    require_valid(data)
    if degree_bound < 2:
        raise InputError("degree bound for the power-series frame must be at least 2")
    prime = iis1_prime_report(data)
    violations = {}
    if not prime.ok:
        violations["iis1"] = prime.violations
    if data.flat_frame is not None:
        frame_check = flat_frame_report(data, data.flat_frame)
        if not frame_check.ok:
            raise InputError(f"supplied flat frame rejected: {frame_check.violations[0]['kind']}")
        frame, keep, bound, source, soft = data.flat_frame, None, None, "supplied", PASS
    else:
        bound = degree_bound
        frame = power_series_frame(data, bound)
        p = data.p
        keep = lambda e: _leaf_degree(e, p) <= bound - 2  # noqa: E731
        source, soft = "power_series", TRUNCATED

    direct = iis1_direct_report(data, frame, keep)
    iis3 = iis3_report(data, frame, keep)
    iis2 = iis2_report(data, frame, keep)
    for name, rep in (("iis1_direct", direct), ("iis2", iis2), ("iis3", iis3)):
        if not rep.ok:
            violations[name] = rep.violations
    return IISCheck(
        iis1=PASS if prime.ok else FAIL,
        iis2=soft if iis2.ok else FAIL,
        iis3=soft if iis3.ok else FAIL,
        iis1_direct=soft if direct.ok else FAIL,
        frame=source,
        degree_bound=bound,
        violations=violations,
    )
