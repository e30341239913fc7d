"""Seeded random extensions and forms for property checks.

All generators take a :class:`random.Random` so that runs are reproducible;
:func:`make_rng` reads the ``ATIYAH_LAB_SEED`` environment variable.
"""

import os
import random
from itertools import combinations, product

from .chart import IISData, IISForm, PairForm, assemble_connection
from .exactcore import Matrix, Poly, monomials_up_to
from .liepair_point import LiePairPoint, PointConnection, construct_default_extension

DEFAULT_SEED = 20240611
COEFFS = (-2, -1, 1, 2, 3)


def make_rng(seed=None):
    if seed is None:
        seed = int(os.environ.get("ATIYAH_LAB_SEED", DEFAULT_SEED))
    return random.Random(seed)


def random_poly(rng, nvars, max_degree=2, max_terms=3):
    monos = monomials_up_to(nvars, max_degree)
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        terms[rng.choice(monos)] = rng.choice(COEFFS)
    return Poly(nvars, terms)


def random_matrix(rng, nvars, rows, cols, max_degree=2):
    return Matrix(
        [[random_poly(rng, nvars, max_degree) for _ in range(cols)] for _ in range(rows)],
        zero=Poly.zero(nvars),
        cols=cols,
    )


def random_point_extension(rng, pair: LiePairPoint, density=0.5) -> PointConnection:
    """The default extension plus random values in every unconstrained slot."""
    n, q = pair.n, pair.q
    gamma = [[list(row) for row in plane] for plane in construct_default_extension(pair).gamma]
    for a, b, k in product(range(n), repeat=3):
        if b < q <= k:
            continue
        if a < q <= b and k >= q:
            continue
        if rng.random() < density:
            gamma[a][b][k] = rng.choice(COEFFS)
    return PointConnection(gamma)


def random_chart_extension(rng, data: IISData, max_degree=2):
    """An extension with random transverse, J and mixed blocks."""
    n, p, q, m = data.n, data.p, data.q, data.m
    quotient = list(data.christoffel) + [random_matrix(rng, n, m, m, max_degree) for _ in range(n - p)]
    k_conn = [random_matrix(rng, n, q, q, max_degree) for _ in range(n)]
    mixed = [random_matrix(rng, n, q, m, max_degree) for _ in range(n)]
    return assemble_connection(data, quotient, k_conn, mixed)


def random_iis_form(rng, data: IISData, degree, max_degree=2):
    n, m = data.n, data.m
    return IISForm(degree, {
        key: tuple(random_matrix(rng, n, m, m, max_degree) for _ in range(n - data.p))
        for key in combinations(range(data.p), degree)
    })


def random_pair_form(rng, data: IISData, degree, max_degree=2):
    n, m = data.n, data.m
    return PairForm(degree, {
        key: tuple(tuple(tuple(random_poly(rng, n, max_degree) for _ in range(m)) for _ in range(m))
                   for _ in range(m))
        for key in combinations(range(data.q), degree)
    })
