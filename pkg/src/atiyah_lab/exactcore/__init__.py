"""Exact scalars, sparse polynomials, matrices and rational linear algebra."""

from .linalg import (
    InconsistentSystemError,
    SparseSystem,
    kernel_basis,
    linear_solve,
    mat_vec,
    rank,
    vec_mat,
)
from .matrix import Matrix, determinant, maximal_minors
from .parse import parse_poly, parse_rational
from .poly import Poly, Rational, as_rational, format_rational, monomials_up_to, poly_arith, poly_diff

__all__ = [
    "InconsistentSystemError",
    "Matrix",
    "Poly",
    "Rational",
    "SparseSystem",
    "as_rational",
    "determinant",
    "format_rational",
    "kernel_basis",
    "linear_solve",
    "mat_vec",
    "maximal_minors",
    "monomials_up_to",
    "parse_poly",
    "parse_rational",
    "poly_arith",
    "poly_diff",
    "rank",
    "vec_mat",
]
