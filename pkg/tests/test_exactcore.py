import random
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from atiyah_lab.errors import InputError, ParseError
from atiyah_lab.exactcore import (
    InconsistentSystemError,
    Matrix,
    Poly,
    SparseSystem,
    determinant,
    format_rational,
    kernel_basis,
    linear_solve,
    mat_vec,
    parse_poly,
    parse_rational,
    poly_arith,
    poly_diff,
    rank,
    vec_mat,
)
from oracles import to_sympy, xs


def P(text, n=3):
    return parse_poly(text, n)


def test_poly_arith_examples():
    assert poly_arith(P("x1 + 1", 1), P("x1 - 1", 1), "mul") == P("x1^2 - 1", 1)
    p = P("3/2*x1^2*x2 - x3")
    assert poly_arith(p, Poly.zero(3), "add") == p
    diff = poly_arith(P("x1*x2"), P("x1*x2"), "sub")
    assert diff.terms == {}
    assert diff.is_zero()


def test_poly_arith_rejects_mismatched_variables():
    with pytest.raises(InputError):
        poly_arith(P("x1", 1), P("x1", 2), "add")
    with pytest.raises(InputError):
        poly_arith(P("x1", 1), P("x1", 1), "div")


def test_poly_diff_examples():
    assert poly_diff(P("x1^2*x2", 2), 0) == P("2*x1*x2", 2)
    assert poly_diff(P("x1", 2), 1) == 0
    assert poly_diff(P("3/2*x1 + x2^3", 2), 0) == Fraction(3, 2)
    with pytest.raises(InputError):
        poly_diff(P("x1", 2), 2)


def test_printing_is_graded_lex():
    p = Poly(3, {(0, 0, 1): -1, (2, 1, 0): Fraction(3, 2), (0, 0, 0): 4})
    assert str(p) == "3/2*x1^2*x2 - x3 + 4"
    assert parse_poly(str(p), 3) == p
    assert str(Poly.zero(2)) == "0"
    assert format_rational(Fraction(-6, 4)) == "-3/2"


@pytest.mark.parametrize(
    "text, pos",
    [("x1^", 3), ("x1 +", 4), ("2x1", 1), ("x4", 0), ("(x1", 3), ("1/0", 2)],
)
def test_parse_errors_report_position(text, pos):
    with pytest.raises(ParseError) as info:
        parse_poly(text, 3)
    assert info.value.position == pos


def test_parse_rational():
    assert parse_rational("-3/6") == Fraction(-1, 2)
    assert parse_rational("7") == 7
    with pytest.raises(ParseError):
        parse_rational("1/0")


def test_linear_solve_examples():
    assert linear_solve([[1, 0], [0, 1]], [3, -2]) == [3, -2]
    with pytest.raises(InconsistentSystemError) as info:
        linear_solve([[1, 1], [2, 2]], [1, 3])
    assert info.value.certificate == [-2, 1]


def test_linear_solve_random_consistent():
    rng = random.Random(5)
    for _ in range(20):
        a = [[Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(4)] for _ in range(6)]
        x0 = [Fraction(rng.randint(-9, 9), rng.randint(1, 3)) for _ in range(4)]
        b = mat_vec(a, x0)
        x = linear_solve(a, b)
        assert mat_vec(a, x) == b


def test_linear_solve_dimension_mismatch():
    with pytest.raises(InputError):
        linear_solve([[1, 0]], [1, 2])


def test_kernel_examples():
    (v,) = kernel_basis([[1, 1]])
    assert v[0] == -v[1] != 0
    assert kernel_basis([[2, 0, 0], [0, 1, 0], [1, 0, 3]]) == []
    assert len(kernel_basis([[0, 0, 0], [0, 0, 0]])) == 3


def test_sparse_system_matches_dense_solver():
    system = SparseSystem(2)
    system.add("a", 0, 1)
    system.add("a", 1, 1)
    system.add("b", 0, 2)
    system.add("b", 1, 2)
    system.set_rhs("a", 1)
    system.set_rhs("b", 3)
    with pytest.raises(InconsistentSystemError) as info:
        system.solve()
    y = info.value.certificate
    assert vec_mat(y, system.dense()) == [0, 0]
    assert sum(u * v for u, v in zip(y, system.rhs)) != 0


def test_determinant_matches_sympy():
    rng = random.Random(11)
    n = 3
    for _ in range(5):
        rows = [[Poly(2, {(rng.randint(0, 2), rng.randint(0, 1)): rng.randint(-3, 3)}) for _ in range(n)]
                for _ in range(n)]
        m = Matrix(rows, zero=Poly.zero(2))
        ref = sympy.Matrix([[to_sympy(e) for e in row] for row in rows]).det()
        assert sympy.expand(to_sympy(determinant(m)) - ref) == 0


# -- properties ----------------------------------------------------------------------

rationals = st.fractions(min_value=-50, max_value=50, max_denominator=12)
monomials = st.tuples(*[st.integers(0, 3)] * 3)
polys = st.dictionaries(monomials, st.integers(-5, 5).filter(bool), max_size=4).map(lambda t: Poly(3, t))


@given(rationals, rationals, rationals)
def test_rational_field_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * b == b * a
    assert a * (b + c) == a * b + a * c


@given(polys, polys, polys)
@settings(max_examples=60)
def test_poly_ring_axioms(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert to_sympy(a * b) == sympy.expand(to_sympy(a) * to_sympy(b))


@given(polys, st.integers(0, 2), st.integers(0, 2))
def test_partials_commute(p, mu, nu):
    assert p.diff(mu).diff(nu) == p.diff(nu).diff(mu)
    x = xs(3)
    assert to_sympy(p.diff(mu)) == sympy.expand(sympy.diff(to_sympy(p), x[mu]))


@given(polys)
def test_print_parse_round_trip(p):
    assert parse_poly(str(p), 3) == p


small = st.integers(-3, 3)


@given(st.integers(1, 4), st.integers(1, 4), st.data())
@settings(max_examples=80)
def test_solver_and_certificates_are_consistent(rows, cols, data):
    a = [[data.draw(small) for _ in range(cols)] for _ in range(rows)]
    b = [data.draw(small) for _ in range(rows)]
    try:
        x = linear_solve(a, b)
    except InconsistentSystemError as exc:
        y = exc.certificate
        assert all(v == 0 for v in vec_mat(y, a))
        assert sum(u * v for u, v in zip(y, b)) != 0
        assert rank([row + [rhs] for row, rhs in zip(a, b)]) > rank(a)
    else:
        assert mat_vec(a, x) == b
    kernel = kernel_basis(a)
    assert len(kernel) == cols - rank(a)
    for v in kernel:
        assert all(t == 0 for t in mat_vec(a, v))
    assert rank(a) == sympy.Matrix(a).rank()
