"""Exact integer/rational linear algebra kernel.

Vectors are tuples, matrices are tuples of row tuples.  Everything is
computed in exact arithmetic: integer determinants by fraction-free
Bareiss elimination, rational inverses by Gauss-Jordan, column-style
Hermite normal form, and LLL reduction with exact rational
Gram-Schmidt (delta = 3/4).
"""

from __future__ import annotations

from math import gcd
from typing import Sequence

from .errors import RankDeficientError, SingularError, ZeroVectorError
from .rat import ONE, Rat, rat_floor

IntVec = tuple
RatVec = tuple
Matrix = tuple


def dot(u: Sequence, v: Sequence):
    return sum(a * b for a, b in zip(u, v))


def vec_add(u, v):
    return tuple(a + b for a, b in zip(u, v))


def vec_sub(u, v):
    return tuple(a - b for a, b in zip(u, v))


def vec_scale(c, v):
    return tuple(c * a for a in v)


def identity(n: int) -> Matrix:
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def transpose(m: Matrix) -> Matrix:
    return tuple(zip(*m))


def mat_cols(m: Matrix):
    return [list(col) for col in zip(*m)]


def mat_from_cols(cols) -> Matrix:
    return tuple(tuple(row) for row in zip(*cols))


def mat_vec(m: Matrix, v: Sequence) -> tuple:
    return tuple(dot(row, v) for row in m)


def mat_mul(a: Matrix, b: Matrix) -> Matrix:
    bt = list(zip(*b))
    return tuple(tuple(dot(row, col) for col in bt) for row in a)


def content(v: Sequence[int]) -> int:
    g = 0
    for x in v:
        g = gcd(g, abs(x))
    return g


def primitive(v: Sequence[int]) -> IntVec:
    """v divided by the gcd of its entries (same direction, content 1)."""
    c = content(v)
    if c == 0:
        raise ZeroVectorError("cannot normalize the zero vector")
    return tuple(x // c for x in v)


def primitive_direction(v: Sequence) -> IntVec:
    """Primitive integer vector spanning the same ray as a rational v."""
    from math import lcm

    scale = 1
    for x in v:
        scale = lcm(scale, x.denominator if hasattr(x, "denominator") else 1)
    return primitive([int(x * scale) for x in v])


def det(m: Matrix) -> int:
    """Determinant of a square integer matrix (fraction-free Bareiss)."""
    n = len(m)
    if n == 0:
        return 1
    a = [list(row) for row in m]
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        pivot = a[k][k]
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) // prev
            a[i][k] = 0
        prev = pivot
    return sign * a[n - 1][n - 1]


def rat_det(m: Matrix):
    """Determinant of a square rational matrix."""
    n = len(m)
    a = [[Rat(x) * ONE for x in row] for row in m]
    result = ONE
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            return Rat(0)
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
            result = -result
        pivot = a[k][k]
        result *= pivot
        for i in range(k + 1, n):
            factor = a[i][k] / pivot
            if factor != 0:
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
    return result


def inverse(m: Matrix) -> Matrix:
    """Exact inverse of a square rational matrix (Gauss-Jordan)."""
    n = len(m)
    a = [[Rat(x) * ONE for x in row] + [ONE if i == j else Rat(0) for j in range(n)]
         for i, row in enumerate(m)]
    for k in range(n):
        pivot_row = next((i for i in range(k, n) if a[i][k] != 0), None)
        if pivot_row is None:
            raise SingularError("matrix is singular")
        if pivot_row != k:
            a[k], a[pivot_row] = a[pivot_row], a[k]
        pivot = a[k][k]
        a[k] = [x / pivot for x in a[k]]
        for i in range(n):
            if i != k and a[i][k] != 0:
                factor = a[i][k]
                a[i] = [x - factor * y for x, y in zip(a[i], a[k])]
    return tuple(tuple(row[n:]) for row in a)


def hnf(m: Matrix) -> tuple[Matrix, Matrix]:
    """Column-style Hermite normal form of a full-row-rank integer matrix.

    Returns (H, U) with H = M @ U, U unimodular; H is lower triangular
    with positive pivots and 0 <= H[i][j] < H[i][i] for j < i.
    """
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    cols = mat_cols(m)
    ucols = mat_cols(identity(ncols))

    def combine(dst, src, q):
        cols[dst] = [x - q * y for x, y in zip(cols[dst], cols[src])]
        ucols[dst] = [x - q * y for x, y in zip(ucols[dst], ucols[src])]

    for i in range(nrows):
        while True:
            nonzero = [j for j in range(i, ncols) if cols[j][i] != 0]
            if not nonzero:
                raise RankDeficientError(f"row {i} has no pivot")
            j0 = min(nonzero, key=lambda j: (abs(cols[j][i]), j))
            if j0 != i:
                cols[i], cols[j0] = cols[j0], cols[i]
                ucols[i], ucols[j0] = ucols[j0], ucols[i]
            if len(nonzero) == 1:
                break
            pivot = cols[i][i]
            for j in range(i + 1, ncols):
                if cols[j][i] != 0:
                    combine(j, i, cols[j][i] // pivot)
        if cols[i][i] < 0:
            cols[i] = [-x for x in cols[i]]
            ucols[i] = [-x for x in ucols[i]]
        pivot = cols[i][i]
        for j in range(i):
            q = cols[j][i] // pivot
            if q != 0:
                combine(j, i, q)
    return mat_from_cols(cols), mat_from_cols(ucols)


def lll_reduce(basis: Matrix, delta=Rat(3, 4)) -> Matrix:
    """LLL-reduced basis of the lattice spanned by the columns of `basis`.

    Exact rational Gram-Schmidt; raises RankDeficientError on dependent
    columns.  Output spans the same lattice.
    """
    cols = mat_cols(basis)
    n = len(cols)
    half = Rat(1, 2)

    def gram_schmidt():
        star = []
        mu = [[Rat(0)] * n for _ in range(n)]
        norms = []
        for i in range(n):
            v = [Rat(x) * ONE for x in cols[i]]
            for j in range(i):
                mu[i][j] = dot(cols[i], star[j]) / norms[j]
                v = [x - mu[i][j] * y for x, y in zip(v, star[j])]
            norm = dot(v, v)
            if norm == 0:
                raise RankDeficientError("basis columns are dependent")
            star.append(v)
            norms.append(norm)
        return star, mu, norms

    star, mu, norms = gram_schmidt()
    k = 1
    while k < n:
        for j in range(k - 1, -1, -1):
            if 2 * abs(mu[k][j]) > 1:
                # nearest integer, half-up for determinism
                q = rat_floor(mu[k][j] + half)
                cols[k] = [x - q * y for x, y in zip(cols[k], cols[j])]
                star, mu, norms = gram_schmidt()
        if norms[k] >= (delta - mu[k][k - 1] ** 2) * norms[k - 1]:
            k += 1
        else:
            cols[k], cols[k - 1] = cols[k - 1], cols[k]
            star, mu, norms = gram_schmidt()
            k = max(k - 1, 1)
    return mat_from_cols(cols)
