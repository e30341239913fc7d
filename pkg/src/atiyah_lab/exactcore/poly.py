"""Sparse multivariate polynomials with rational coefficients.

A polynomial in ``nvars`` chart variables is a map from exponent tuples to
nonzero :class:`fractions.Fraction` coefficients.  Variables are indexed from
0 in the Python API and printed as ``x1 .. xN``.
"""

from fractions import Fraction
from numbers import Rational as _RationalABC

from ..errors import InputError

Rational = Fraction


def as_rational(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, _RationalABC)):
        return Fraction(value)
    raise InputError(f"not an exact rational: {value!r}")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def _grlex_key(exp):
    return (sum(exp), exp)


class Poly:
    """Immutable sparse polynomial over Q.

    Arithmetic accepts other polynomials with the same ``nvars`` as well as
    ints and Fractions, which are treated as constants.
    """

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise InputError("nvars must be non-negative")
        clean = {}
        if terms:
            for exp, coeff in terms.items():
                coeff = as_rational(coeff)
                if not coeff:
                    continue
                exp = tuple(int(e) for e in exp)
                if len(exp) != nvars or any(e < 0 for e in exp):
                    raise InputError(f"bad exponent {exp} for {nvars} variables")
                clean[exp] = clean.get(exp, 0) + coeff
                if not clean[exp]:
                    del clean[exp]
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars, terms):
        p = cls.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars):
        return cls._raw(nvars, {})

    @classmethod
    def const(cls, nvars, value):
        value = as_rational(value)
        return cls._raw(nvars, {(0,) * nvars: value} if value else {})

    @classmethod
    def var(cls, nvars, index, power=1):
        if not 0 <= index < nvars:
            raise InputError(f"variable index {index} out of range for {nvars} variables")
        exp = [0] * nvars
        exp[index] = power
        return cls._raw(nvars, {tuple(exp): Fraction(1)})

    # -- coercion -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, Poly):
            if other.nvars != self.nvars:
                raise InputError(f"nvars mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(self.nvars, other)
        return NotImplemented

    # -- ring operations ----------------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for exp, c in other.terms.items():
            s = out.get(exp, 0) + c
            if s:
                out[exp] = s
            else:
                out.pop(exp, None)
        return Poly._raw(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Poly._raw(self.nvars, {})
            return Poly._raw(self.nvars, {e: c * other for e, c in self.terms.items()})
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.terms or not other.terms:
            return Poly._raw(self.nvars, {})
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                s = out.get(e, 0) + c1 * c2
                if s:
                    out[e] = s
                else:
                    del out[e]
        return Poly._raw(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k):
        if not isinstance(k, int) or k < 0:
            raise InputError("exponent must be a non-negative integer")
        result = Poly.const(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    # -- comparisons --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {(0,) * self.nvars: other}
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # -- calculus and inspection ---------------------------------------------

    def is_zero(self):
        return not self.terms

    def is_constant(self):
        return all(not any(e) for e in self.terms)

    def constant_term(self) -> Fraction:
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def partial_degree(self, variables) -> int:
        """Degree in the given subset of variables; -1 for zero."""
        return max((sum(e[i] for i in variables) for e in self.terms), default=-1)

    def depends_on(self, index) -> bool:
        return any(e[index] for e in self.terms)

    def diff(self, index):
        if not 0 <= index < self.nvars:
            raise InputError(f"variable index {index} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                ne = e[:index] + (k - 1,) + e[index + 1:]
                out[ne] = c * k
        return Poly._raw(self.nvars, out)

    def filter_terms(self, keep):
        """Polynomial made of the terms whose exponent satisfies ``keep``."""
        return Poly._raw(self.nvars, {e: c for e, c in self.terms.items() if keep(e)})

    def drop_leading_vars(self, k):
        """Re-express in the last ``nvars - k`` variables.

        Raises InputError if the polynomial involves any of the first k.
        """
        out = {}
        for e, c in self.terms.items():
            if any(e[:k]):
                raise InputError("polynomial depends on a dropped variable")
            out[e[k:]] = c
        return Poly._raw(self.nvars - k, out)

    def lift_leading_vars(self, k):
        """Embed into nvars + k variables, the new ones placed first."""
        pad = (0,) * k
        return Poly._raw(self.nvars + k, {pad + e: c for e, c in self.terms.items()})

    def evaluate(self, point):
        total = Fraction(0)
        for e, c in self.terms.items():
            t = c
            for x, k in zip(point, e):
                if k:
                    t *= Fraction(x) ** k
            total += t
        return total

    def sorted_terms(self):
        """Terms in graded-lexicographic order, highest first."""
        return sorted(self.terms.items(), key=lambda item: _grlex_key(item[0]), reverse=True)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for idx, (e, c) in enumerate(self.sorted_terms()):
            mono = "*".join(
                f"x{i + 1}" if k == 1 else f"x{i + 1}^{k}" for i, k in enumerate(e) if k
            )
            mag = abs(c)
            if mono:
                body = mono if mag == 1 else f"{format_rational(mag)}*{mono}"
            else:
                body = format_rational(mag)
            if idx == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __repr__(self):
        return f"Poly({self.nvars}, {str(self)!r})"


def poly_arith(a: Poly, b: Poly, op: str) -> Poly:
    if not isinstance(a, Poly) or not isinstance(b, Poly):
        raise InputError("poly_arith expects two polynomials")
    if a.nvars != b.nvars:
        raise InputError(f"nvars mismatch: {a.nvars} vs {b.nvars}")
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    raise InputError(f"unknown polynomial operation {op!r}")


def poly_diff(p: Poly, var: int) -> Poly:
    return p.diff(var)


def monomials_up_to(nvars, degree):
    """All exponent tuples of total degree <= degree, low degree first."""
    out = []

    def rec(prefix, remaining, slots):
        if slots == 1:
            out.append(tuple(prefix) + (remaining,))
            return
        for k in range(remaining, -1, -1):
            rec(prefix + [k], remaining - k, slots - 1)

    if nvars == 0:
        return [()]
    for d in range(degree + 1):
        rec([], d, nvars)
    return out
