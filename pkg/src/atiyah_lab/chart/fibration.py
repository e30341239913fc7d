"""Coordinate fibrations (x1..xn) -> (x_{p+1}..xn) with kernel J = span{e_1..e_q}."""

from dataclasses import dataclass
from typing import Optional

from ..errors import InputError
from ..exactcore import Matrix, Poly
from .algebroid import ChartAlgebroid, poly_matrix
from .cocycles import FullConnection, assemble_connection
from .iis import IISData, identity_matrix, zero_matrix


@dataclass(frozen=True)
class FibrationResult:
    """Either the quotient data (``fibered``) or the first violated condition."""

    fibered: bool
    quotient: Optional[ChartAlgebroid] = None
    nabla_phi: Optional[IISData] = None
    projectable_conn: Optional[FullConnection] = None
    witness: Optional[dict] = None


def _witness(condition, indices, value):
    return FibrationResult(False, witness={"condition": condition, "indices": indices, "value": str(value)})


def _first_violation(alg: ChartAlgebroid, p, q):
    n, r = alg.nvars, alg.rank
    a, c = alg.anchor, alg.structfn
    for i in range(q):
        for nu in range(p, n):
            if a[nu, i]:
                return _witness("anchor_kernel", [nu + 1, i + 1], a[nu, i])
    for i in range(q):
        for j in range(i + 1, q):
            for k in range(q, r):
                if c[i][j][k]:
                    return _witness("kernel_closure", [i + 1, j + 1, k + 1], c[i][j][k])
    for i in range(q):
        for b in range(q, r):
            for k in range(q, r):
                if c[i][b][k]:
                    return _witness("kernel_ideal", [i + 1, b + 1, k + 1], c[i][b][k])
    leaf = range(p)
    for b in range(q, r):
        for nu in range(p, n):
            if any(a[nu, b].depends_on(mu) for mu in leaf):
                return _witness("anchor_projectable", [nu + 1, b + 1], a[nu, b])
    for i in range(q, r):
        for j in range(i + 1, r):
            for k in range(q, r):
                if any(c[i][j][k].depends_on(mu) for mu in leaf):
                    return _witness("bracket_projectable", [i + 1, j + 1, k + 1], c[i][j][k])
    return None


def make_coordinate_fibration(alg: ChartAlgebroid, p, q, quotient_connection=None,
                              k_connection=None) -> FibrationResult:
    """Check that the projection is a fibration of Lie algebroids and build its data.

    ``quotient_connection`` optionally gives a connection on the quotient
    algebroid's frame over the base (n - p matrices in the base variables); it
    is pulled back to the transverse directions.  ``k_connection`` optionally
    gives the J-blocks (n matrices of size q).
    """
    n, r = alg.nvars, alg.rank
    if not (0 <= p <= n and 0 <= q <= r):
        raise InputError(f"need 0 <= p <= {n} and 0 <= q <= {r}")
    failure = _first_violation(alg, p, q)
    if failure is not None:
        return failure
    nb, m = n - p, r - q
    anchor = [[alg.anchor[nu, b].drop_leading_vars(p) for b in range(q, r)] for nu in range(p, n)]
    structfn = [[[alg.structfn[i][j][k].drop_leading_vars(p) for k in range(q, r)]
                 for j in range(q, r)] for i in range(q, r)]
    quotient = ChartAlgebroid(nb, m, Matrix(anchor, zero=Poly.zero(nb), cols=m), structfn)
    data = IISData(alg, p, q, tuple(zero_matrix(n, m) for _ in range(p)), identity_matrix(n, m))

    blocks = [zero_matrix(n, m) for _ in range(p)]
    if quotient_connection is None:
        blocks += [zero_matrix(n, m) for _ in range(nb)]
    else:
        if len(quotient_connection) != nb:
            raise InputError(f"quotient connection needs {nb} matrices")
        for g in quotient_connection:
            g = g if isinstance(g, Matrix) else poly_matrix(g, nb, m)
            blocks.append(g.map(lambda f: f.lift_leading_vars(p)))
    conn = assemble_connection(data, blocks, k_connection)
    return FibrationResult(True, quotient=quotient, nabla_phi=data, projectable_conn=conn)
