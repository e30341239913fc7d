"""Dense immutable matrices over Q or over polynomials."""

from fractions import Fraction
from itertools import combinations

from ..errors import InputError
from .poly import Poly


class Matrix:
    """A rows x cols array of exact entries.

    Entries are either all Fractions or all Polys in the same number of
    variables.  ``zero`` is the additive identity of the entry ring and is kept
    so that empty or all-zero matrices still know their ring.
    """

    __slots__ = ("rows", "cols", "entries", "zero")

    def __init__(self, entries, zero=None, cols=None):
        entries = tuple(tuple(row) for row in entries)
        self.rows = len(entries)
        if cols is None:
            cols = len(entries[0]) if entries else 0
        self.cols = cols
        if any(len(row) != cols for row in entries):
            raise InputError("ragged matrix rows")
        if zero is None:
            zero = _infer_zero(entries)
        self.zero = zero
        if isinstance(zero, Poly):
            entries = tuple(
                tuple(e if isinstance(e, Poly) else Poly.const(zero.nvars, e) for e in row)
                for row in entries
            )
        else:
            entries = tuple(tuple(Fraction(e) for e in row) for row in entries)
        self.entries = entries

    @classmethod
    def zeros(cls, rows, cols, zero=Fraction(0)):
        return cls([[zero] * cols for _ in range(rows)], zero=zero, cols=cols)

    @classmethod
    def identity(cls, n, zero=Fraction(0)):
        one = zero + 1
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)], zero=zero, cols=n)

    def __getitem__(self, idx):
        i, j = idx
        return self.entries[i][j]

    def row(self, i):
        return self.entries[i]

    def column(self, j):
        return tuple(row[j] for row in self.entries)

    @property
    def shape(self):
        return (self.rows, self.cols)

    def _check_shape(self, other):
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")

    def __add__(self, other):
        self._check_shape(other)
        return Matrix(
            [[a + b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            zero=self.zero,
            cols=self.cols,
        )

    def __sub__(self, other):
        self._check_shape(other)
        return Matrix(
            [[a - b for a, b in zip(r1, r2)] for r1, r2 in zip(self.entries, other.entries)],
            zero=self.zero,
            cols=self.cols,
        )

    def __neg__(self):
        return Matrix([[-a for a in row] for row in self.entries], zero=self.zero, cols=self.cols)

    def scale(self, s):
        return Matrix([[s * a for a in row] for row in self.entries], zero=self.zero, cols=self.cols)

    def __matmul__(self, other):
        if self.cols != other.rows:
            raise InputError(f"cannot multiply {self.shape} by {other.shape}")
        cols = [other.column(j) for j in range(other.cols)]
        out = []
        for row in self.entries:
            out_row = []
            for col in cols:
                acc = self.zero
                for a, b in zip(row, col):
                    if a and b:
                        acc = acc + a * b
                out_row.append(acc)
            out.append(out_row)
        return Matrix(out, zero=self.zero, cols=other.cols)

    def apply(self, vector):
        """Matrix-vector product with a plain sequence."""
        out = []
        for row in self.entries:
            acc = self.zero
            for a, b in zip(row, vector):
                if a and b:
                    acc = acc + a * b
            out.append(acc)
        return tuple(out)

    def commutator(self, other):
        return self @ other - other @ self

    def map(self, fn):
        return Matrix([[fn(a) for a in row] for row in self.entries], zero=self.zero, cols=self.cols)

    def diff(self, index):
        return self.map(lambda p: p.diff(index))

    def block(self, row_range, col_range):
        return Matrix(
            [[self.entries[i][j] for j in col_range] for i in row_range],
            zero=self.zero,
            cols=len(col_range),
        )

    def transpose(self):
        return Matrix(
            [[self.entries[i][j] for i in range(self.rows)] for j in range(self.cols)],
            zero=self.zero,
            cols=self.rows,
        )

    def is_zero(self):
        return all(not a for row in self.entries for a in row)

    def __eq__(self, other):
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.shape == other.shape and self.entries == other.entries

    def __hash__(self):
        return hash(self.entries)

    def tolist(self):
        return [list(row) for row in self.entries]

    def __repr__(self):
        body = "; ".join(", ".join(str(a) for a in row) for row in self.entries)
        return f"Matrix([{body}])"


def _infer_zero(entries):
    for row in entries:
        for e in row:
            if isinstance(e, Poly):
                return Poly.zero(e.nvars)
    return Fraction(0)


def determinant(m: Matrix):
    """Determinant by Laplace expansion along rows with memoised minors.

    Works over any commutative entry ring, in particular over polynomials,
    without needing exact division.
    """
    if m.rows != m.cols:
        raise InputError("determinant of a non-square matrix")
    n = m.rows
    if n == 0:
        return m.zero + 1
    memo = {}

    def minor(row, cols):
        # determinant of rows row..n-1 restricted to the column tuple cols
        if row == n:
            return m.zero + 1
        key = (row, cols)
        if key in memo:
            return memo[key]
        acc = m.zero
        for pos, c in enumerate(cols):
            entry = m.entries[row][c]
            if not entry:
                continue
            sub = minor(row + 1, cols[:pos] + cols[pos + 1:])
            term = entry * sub
            acc = acc - term if pos % 2 else acc + term
        memo[key] = acc
        return acc

    return minor(0, tuple(range(n)))


def maximal_minors(m: Matrix):
    """Yield every maximal square minor of m (size min(rows, cols))."""
    k = min(m.rows, m.cols)
    for rows in combinations(range(m.rows), k):
        for cols in combinations(range(m.cols), k):
            yield determinant(m.block(rows, cols))
