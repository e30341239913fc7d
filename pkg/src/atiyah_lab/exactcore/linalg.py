"""Exact Gaussian elimination over Q.

Rows are held sparsely (column -> Fraction) because the systems produced by
cohomology computations are wide and mostly zero.  Pivoting always takes the
first row with a nonzero entry in the current column, so results are fully
deterministic.
"""

from fractions import Fraction

from ..errors import InputError
from .matrix import Matrix


class InconsistentSystemError(ArithmeticError):
    """Raised by :func:`linear_solve` when A x = b has no solution.

    ``certificate`` is a vector y with y^T A = 0 and y^T b != 0.
    """

    def __init__(self, certificate):
        self.certificate = certificate
        super().__init__("linear system has no solution")


def _rows_of(a):
    if isinstance(a, Matrix):
        return a.rows, a.cols, [list(r) for r in a.entries]
    rows = [list(r) for r in a]
    ncols = len(rows[0]) if rows else 0
    if any(len(r) != ncols for r in rows):
        raise InputError("ragged matrix rows")
    return len(rows), ncols, rows


def _sparse(row):
    return {j: Fraction(v) for j, v in enumerate(row) if v}


def rref(rows, ncols, transforms=None):
    """Reduce sparse rows in place to reduced row echelon form.

    Only columns < ncols are used as pivot columns; anything stored beyond is
    carried along (right-hand sides).  If ``transforms`` is given it is a list
    of sparse rows, updated in lockstep, so that each final row equals the
    recorded combination of the original rows.  Returns the pivot columns.
    """
    pivots = []
    r = 0
    nrows = len(rows)
    for col in range(ncols):
        if r == nrows:
            break
        found = None
        for i in range(r, nrows):
            if col in rows[i]:
                found = i
                break
        if found is None:
            continue
        if found != r:
            rows[r], rows[found] = rows[found], rows[r]
            if transforms is not None:
                transforms[r], transforms[found] = transforms[found], transforms[r]
        prow = rows[r]
        inv = 1 / prow[col]
        if inv != 1:
            for j in prow:
                prow[j] *= inv
            if transforms is not None:
                t = transforms[r]
                for j in t:
                    t[j] *= inv
        for i in range(nrows):
            if i == r:
                continue
            f = rows[i].get(col)
            if not f:
                continue
            target = rows[i]
            for j, v in prow.items():
                s = target.get(j, 0) - f * v
                if s:
                    target[j] = s
                else:
                    target.pop(j, None)
            if transforms is not None:
                tt = transforms[i]
                for j, v in transforms[r].items():
                    s = tt.get(j, 0) - f * v
                    if s:
                        tt[j] = s
                    else:
                        tt.pop(j, None)
        pivots.append(col)
        r += 1
    return pivots


def linear_solve(a, b):
    """Solve A x = b exactly.

    Returns one solution (free variables set to 0) as a list of Fractions.
    Raises :class:`InconsistentSystemError` carrying a Fredholm certificate
    otherwise.
    """
    nrows, ncols, dense = _rows_of(a)
    b = [Fraction(v) for v in b]
    if len(b) != nrows:
        raise InputError(f"right-hand side has length {len(b)}, expected {nrows}")
    rows = []
    for row, rhs in zip(dense, b):
        sparse = _sparse(row)
        if rhs:
            sparse[ncols] = rhs
        rows.append(sparse)
    transforms = [{i: Fraction(1)} for i in range(nrows)]
    pivots = rref(rows, ncols, transforms)
    for i in range(len(pivots), nrows):
        if rows[i].get(ncols):
            y = [Fraction(0)] * nrows
            for j, v in transforms[i].items():
                y[j] = v
            raise InconsistentSystemError(y)
    x = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        x[col] = rows[i].get(ncols, Fraction(0))
    return x


def kernel_basis(a):
    """Basis of the right kernel of A, one vector per free column."""
    nrows, ncols, dense = _rows_of(a)
    rows = [_sparse(row) for row in dense]
    pivots = rref(rows, ncols)
    pivot_set = set(pivots)
    basis = []
    for free in range(ncols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * ncols
        v[free] = Fraction(1)
        for i, col in enumerate(pivots):
            coeff = rows[i].get(free)
            if coeff:
                v[col] = -coeff
        basis.append(v)
    return basis


def rank(a) -> int:
    nrows, ncols, dense = _rows_of(a)
    return len(rref([_sparse(row) for row in dense], ncols))


def mat_vec(a, x):
    _, _, dense = _rows_of(a)
    return [sum((Fraction(v) * x[j] for j, v in enumerate(row) if v), Fraction(0)) for row in dense]


def vec_mat(y, a):
    nrows, ncols, dense = _rows_of(a)
    out = [Fraction(0)] * ncols
    for yi, row in zip(y, dense):
        if yi:
            for j, v in enumerate(row):
                if v:
                    out[j] += yi * v
    return out


class SparseSystem:
    """Incrementally assembled sparse linear system A x = b.

    Equation rows are keyed by arbitrary hashable labels and created on first
    use; this is how cochain-level systems are built without materialising
    dense matrices.
    """

    def __init__(self, nunknowns):
        self.nunknowns = nunknowns
        self.labels = []
        self._index = {}
        self.rows = []
        self.rhs = []

    def _row(self, label):
        idx = self._index.get(label)
        if idx is None:
            idx = len(self.labels)
            self._index[label] = idx
            self.labels.append(label)
            self.rows.append({})
            self.rhs.append(Fraction(0))
        return idx

    def add(self, label, unknown, coeff):
        if not coeff:
            return
        row = self.rows[self._row(label)]
        s = row.get(unknown, 0) + coeff
        if s:
            row[unknown] = s
        else:
            row.pop(unknown, None)

    def set_rhs(self, label, value):
        self.rhs[self._row(label)] = Fraction(value)

    def dense(self):
        return [[row.get(j, Fraction(0)) for j in range(self.nunknowns)] for row in self.rows]

    def solve(self):
        """Same contract as :func:`linear_solve`; certificates index ``labels``."""
        n = self.nunknowns
        rows = []
        for row, rhs in zip(self.rows, self.rhs):
            r = dict(row)
            if rhs:
                r[n] = rhs
            rows.append(r)
        m = len(rows)
        transforms = [{i: Fraction(1)} for i in range(m)]
        pivots = rref(rows, n, transforms)
        for i in range(len(pivots), m):
            if rows[i].get(n):
                y = [Fraction(0)] * m
                for j, v in transforms[i].items():
                    y[j] = v
                raise InconsistentSystemError(y)
        x = [Fraction(0)] * n
        for i, col in enumerate(pivots):
            x[col] = rows[i].get(n, Fraction(0))
        return x
