"""Independent reference computations.

Everything here is written against sympy (or plain Fractions) from the
defining formulas, sharing no code with the package beyond conversion of
inputs.
"""

from fractions import Fraction
from itertools import product

import sympy

from atiyah_lab.exactcore import Poly, parse_poly


def xs(n):
    return sympy.symbols(f"x1:{n + 1}") if n else ()


def to_sympy(p: Poly):
    x = xs(p.nvars)
    expr = sympy.Integer(0)
    for exp, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for v, k in zip(x, exp):
            term *= v ** k
        expr += term
    return sympy.expand(expr)


def from_sympy(expr, nvars):
    expr = sympy.expand(expr)
    if expr == 0:
        return Poly.zero(nvars)
    poly = sympy.Poly(expr, *xs(nvars)) if nvars else None
    if poly is None:
        r = sympy.Rational(expr)
        return Poly.const(0, Fraction(int(r.p), int(r.q)))
    terms = {m: Fraction(int(c.p), int(c.q)) for m, c in poly.terms()}
    return Poly(nvars, terms)


def same(poly: Poly, expr):
    return sympy.expand(to_sympy(poly) - expr) == 0


# -- point case -------------------------------------------------------------------


def point_bracket(c, x, y):
    n = len(c)
    return [sum(x[i] * y[j] * c[i][j][k] for i in range(n) for j in range(n)) for k in range(n)]


def point_nabla(gamma, x, y):
    """nabla_x y for vectors x, y and gamma[a][b][k]."""
    n = len(gamma)
    return [sum(x[a] * y[b] * gamma[a][b][k] for a in range(n) for b in range(n)) for k in range(n)]


def point_cocycle(c, gamma, q):
    """omega[j][(cc, a, b)] = component cc of R(e_j, e_a) e_b, a, b, cc >= q, by direct expansion."""
    n = len(c)
    e = [[Fraction(int(i == k)) for k in range(n)] for i in range(n)]
    out = {}
    for j in range(q):
        for a, b in product(range(q, n), repeat=2):
            t1 = point_nabla(gamma, e[j], point_nabla(gamma, e[a], e[b]))
            t2 = point_nabla(gamma, e[a], point_nabla(gamma, e[j], e[b]))
            t3 = point_nabla(gamma, point_bracket(c, e[j], e[a]), e[b])
            r = [u - v - w for u, v, w in zip(t1, t2, t3)]
            for cc in range(q, n):
                out[j, cc - q, a - q, b - q] = r[cc]
    return out


def jacobiator(c, i, j, k):
    n = len(c)
    e = [[Fraction(int(s == t)) for t in range(n)] for s in range(n)]
    b = lambda x, y: point_bracket(c, x, y)  # noqa: E731
    terms = [b(b(e[i], e[j]), e[k]), b(b(e[j], e[k]), e[i]), b(b(e[k], e[i]), e[j])]
    return [sum(t[s] for t in terms) for s in range(n)]


# -- chart case -------------------------------------------------------------------


def _sym(v):
    if isinstance(v, Poly):
        return to_sympy(v)
    return sympy.sympify(str(v).replace("^", "**"))


class SymAlgebroid:
    """Anchor and brackets as sympy objects, sections as lists of expressions."""

    def __init__(self, nvars, rank, anchor, brackets):
        self.n, self.r = nvars, rank
        self.x = xs(nvars)
        self.anchor = [[_sym(anchor[mu][i]) for i in range(rank)] for mu in range(nvars)]
        self.c = [[[sympy.Integer(0)] * rank for _ in range(rank)] for _ in range(rank)]
        for (i, j), coeffs in brackets.items():
            for k, v in coeffs.items():
                v = _sym(v)
                self.c[i][j][k] = v
                self.c[j][i][k] = -v

    @classmethod
    def from_chart(cls, alg):
        brackets = {}
        for i in range(alg.rank):
            for j in range(i + 1, alg.rank):
                brackets[(i, j)] = {k: alg.structfn[i][j][k] for k in range(alg.rank)}
        return cls(alg.nvars, alg.rank, alg.anchor.tolist(), brackets)

    def frame(self, i):
        return [sympy.Integer(int(k == i)) for k in range(self.r)]

    def rho(self, s):
        return [sum(self.anchor[mu][i] * s[i] for i in range(self.r)) for mu in range(self.n)]

    def derive(self, field, f):
        return sum(field[mu] * sympy.diff(f, self.x[mu]) for mu in range(self.n))

    def bracket(self, a, b):
        out = []
        ra, rb = self.rho(a), self.rho(b)
        for k in range(self.r):
            v = sum(a[i] * b[j] * self.c[i][j][k] for i in range(self.r) for j in range(self.r))
            v += self.derive(ra, b[k]) - self.derive(rb, a[k])
            out.append(sympy.expand(v))
        return out


def sym_matrix(mat):
    return sympy.Matrix([[to_sympy(e) for e in row] for row in mat.entries]) if mat.rows else sympy.zeros(0, 0)


def covariant(sa, gammas, field, s):
    """TM-connection nabla_X s = X(s) + sum_mu X^mu Gamma_mu s."""
    out = []
    for c in range(sa.r):
        v = sa.derive(field, s[c])
        for mu in range(sa.n):
            v += field[mu] * sum(gammas[mu][c, b] * s[b] for b in range(sa.r))
        out.append(sympy.expand(v))
    return out


def basic(sa, gammas, a1, a2):
    """nabla^bas_{a1} a2 = [a1, a2] + nabla_{rho(a2)} a1 on arbitrary sections."""
    br = sa.bracket(a1, a2)
    cov = covariant(sa, gammas, sa.rho(a2), a1)
    return [sympy.expand(u + v) for u, v in zip(br, cov)]


def basic_pair_cocycle(alg, q, conn):
    """Class of R_bas(e_j, e_a) e_b from the A-connection on general sections."""
    sa = SymAlgebroid.from_chart(alg)
    gammas = [sym_matrix(g) for g in conn.christoffel_full]
    e = sa.frame
    out = {}
    for j in range(q):
        for a, b in product(range(q, sa.r), repeat=2):
            t1 = basic(sa, gammas, e(j), basic(sa, gammas, e(a), e(b)))
            t2 = basic(sa, gammas, e(a), basic(sa, gammas, e(j), e(b)))
            t3 = basic(sa, gammas, sa.bracket(e(j), e(a)), e(b))
            for c in range(q, sa.r):
                out[j, c - q, a - q, b - q] = sympy.expand(t1[c] - t2[c] - t3[c])
    return out


def iis_cocycle(data, conn):
    """Quotient block of R(d_mu, d_nu) = [nabla_mu, nabla_nu] applied to frame sections."""
    n, p, q, r = data.n, data.p, data.q, data.r
    x = xs(n)
    g = [sym_matrix(m) for m in conn.christoffel_full]
    out = {}
    for mu in range(p):
        for nu in range(p, n):
            for b in range(q, r):
                s = sympy.Matrix([int(k == b) for k in range(r)])
                nab = lambda d, v: v.diff(x[d]) + g[d] * v  # noqa: E731
                val = nab(mu, nab(nu, s)) - nab(nu, nab(mu, s))
                for c in range(q, r):
                    out[mu, nu, c - q, b - q] = sympy.expand(val[c])
    return out


def parse(text, nvars):
    return parse_poly(text, nvars)
