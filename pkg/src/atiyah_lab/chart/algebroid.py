"""Lie algebroids trivialised over a polynomial coordinate chart.

The chart has coordinates x1..xn and the algebroid a global frame e_1..e_r.
A section is a tuple of r polynomials (its frame components); a vector field
is a tuple of n polynomials (its components along d/dx_mu).
"""

from dataclasses import dataclass
from itertools import combinations

from ..errors import InputError
from ..exactcore import Matrix, Poly
from ..validation import ValidationReport


@dataclass(frozen=True)
class ChartAlgebroid:
    """Anchor column i is rho(e_i); [e_i, e_j] = sum_k structfn[i][j][k] e_k."""

    nvars: int
    rank: int
    anchor: Matrix
    structfn: tuple

    def __post_init__(self):
        n, r = self.nvars, self.rank
        if self.anchor.shape != (n, r):
            raise InputError(f"anchor must be {n}x{r}, got {self.anchor.shape}")
        sf = tuple(tuple(tuple(_as_poly(v, n) for v in row) for row in plane) for plane in self.structfn)
        if len(sf) != r or any(len(p) != r or any(len(x) != r for x in p) for p in sf):
            raise InputError(f"structure functions must have shape ({r}, {r}, {r})")
        object.__setattr__(self, "structfn", sf)
        if r and n and not isinstance(self.anchor.zero, Poly):
            object.__setattr__(self, "anchor", _poly_matrix(self.anchor.tolist(), n, r))

    @classmethod
    def build(cls, nvars, rank, anchor, brackets=None):
        """Convenience constructor.

        ``anchor`` is an n x r nested list; ``brackets`` maps 0-based (i, j)
        to {k: coefficient} and the antisymmetric partner is filled in.
        """
        zero = Poly.zero(nvars)
        sf = [[[zero] * rank for _ in range(rank)] for _ in range(rank)]
        for (i, j), coeffs in (brackets or {}).items():
            if not (0 <= i < rank and 0 <= j < rank):
                raise InputError(f"bracket index ({i}, {j}) out of range")
            for k, v in coeffs.items():
                v = _as_poly(v, nvars)
                sf[i][j][k] = v
                sf[j][i][k] = -v
        return cls(nvars, rank, _poly_matrix(anchor, nvars, rank), sf)

    @property
    def zero(self):
        return Poly.zero(self.nvars)

    def frame(self, i):
        one = Poly.const(self.nvars, 1)
        return tuple(one if k == i else self.zero for k in range(self.rank))

    def anchor_of(self, section):
        """The vector field rho(section)."""
        out = []
        for mu in range(self.nvars):
            acc = self.zero
            row = self.anchor.row(mu)
            for coeff, s in zip(row, section):
                if coeff and s:
                    acc = acc + coeff * s
            out.append(acc)
        return tuple(out)

    def anchor_column(self, i):
        return self.anchor.column(i)


def _as_poly(v, nvars):
    if isinstance(v, Poly):
        if v.nvars != nvars:
            raise InputError(f"polynomial in {v.nvars} variables, expected {nvars}")
        return v
    if isinstance(v, str):
        from ..exactcore import parse_poly

        return parse_poly(v, nvars)
    return Poly.const(nvars, v)


def _poly_matrix(rows, nvars, cols):
    return Matrix([[_as_poly(v, nvars) for v in row] for row in rows], zero=Poly.zero(nvars), cols=cols)


def poly_matrix(rows, nvars, cols=None):
    """Matrix of polynomials from nested lists of Poly, numbers or polynomial text."""
    if cols is None:
        cols = len(rows[0]) if rows else 0
    return _poly_matrix(rows, nvars, cols)


def apply_vector_field(field, f):
    """X(f) = sum_mu X^mu df/dx_mu."""
    acc = Poly.zero(f.nvars)
    for mu, x in enumerate(field):
        if x:
            d = f.diff(mu)
            if d:
                acc = acc + x * d
    return acc


def vector_field_bracket(x, y):
    return tuple(apply_vector_field(x, y[mu]) - apply_vector_field(y, x[mu]) for mu in range(len(x)))


def bracket_sections(alg: ChartAlgebroid, a, b):
    """Leibniz-extended bracket of two sections given by frame components."""
    r = alg.rank
    if len(a) != r or len(b) != r:
        raise InputError(f"sections must have {r} components")
    a = tuple(_as_poly(v, alg.nvars) for v in a)
    b = tuple(_as_poly(v, alg.nvars) for v in b)
    out = [alg.zero] * r
    for i in range(r):
        if not a[i]:
            continue
        for j in range(r):
            if not b[j]:
                continue
            f = a[i] * b[j]
            cij = alg.structfn[i][j]
            for k in range(r):
                if cij[k]:
                    out[k] = out[k] + f * cij[k]
    ra, rb = alg.anchor_of(a), alg.anchor_of(b)
    for k in range(r):
        out[k] = out[k] + apply_vector_field(ra, b[k]) - apply_vector_field(rb, a[k])
    return tuple(out)


def validate_chart_algebroid(alg: ChartAlgebroid) -> ValidationReport:
    report = ValidationReport("chart_algebroid")
    r = alg.rank
    sf = alg.structfn
    for i in range(r):
        for j in range(i, r):
            for k in range(r):
                if sf[i][j][k] != -sf[j][i][k]:
                    report.add("antisymmetry", indices=[i + 1, j + 1, k + 1])
    for i, j in combinations(range(r), 2):
        lhs = alg.anchor_of(sf[i][j])
        rhs = vector_field_bracket(alg.anchor_column(i), alg.anchor_column(j))
        for mu in range(alg.nvars):
            if lhs[mu] != rhs[mu]:
                report.add("anchor_morphism", indices=[i + 1, j + 1], component=mu + 1,
                           value=str(lhs[mu] - rhs[mu]))
    e = alg.frame
    for i, j, k in combinations(range(r), 3):
        jac = [alg.zero] * r
        for x, y, z in ((i, j, k), (j, k, i), (k, i, j)):
            t = bracket_sections(alg, bracket_sections(alg, e(x), e(y)), e(z))
            jac = [u + v for u, v in zip(jac, t)]
        if any(jac):
            report.add("jacobi", indices=[i + 1, j + 1, k + 1], value=[str(v) for v in jac])
    return report


def tangent_algebroid(n):
    """TR^n with the coordinate frame."""
    return ChartAlgebroid.build(n, n, [[1 if i == j else 0 for j in range(n)] for i in range(n)])


def abelian_algebroid(nvars, rank):
    """A trivial vector bundle with zero anchor and zero bracket."""
    return ChartAlgebroid.build(nvars, rank, [[0] * rank for _ in range(nvars)])


def lie_algebra_algebroid(g, nvars=0):
    """A Lie algebra as a bundle of Lie algebras over a chart (zero anchor)."""
    brackets = {}
    for i in range(g.dim):
        for j in range(i + 1, g.dim):
            coeffs = {k: g.c[i][j][k] for k in range(g.dim) if g.c[i][j][k]}
            if coeffs:
                brackets[(i, j)] = coeffs
    return ChartAlgebroid.build(nvars, g.dim, [[0] * g.dim for _ in range(nvars)], brackets)
