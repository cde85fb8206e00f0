"""Cone projection and signed unimodular decomposition.

The decomposition runs on the dual cone (so the identity holds modulo
cones containing lines, which the discrete generating function kills):
a short vector is chosen from the LLL-reduced coefficient lattice, the
generator with a nonzero coefficient is swapped for it, and the
recursion bottoms out at |det| = 1.  Dual children of lower dimension
never arise here because only columns with nonzero coefficient are
replaced; boundary discrepancies are line-cones by polarity.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import lcm

from .errors import NonGenericDirectionError
from .linalg import (
    det,
    dot,
    hnf,
    inverse,
    lll_reduce,
    mat_cols,
    mat_from_cols,
    mat_vec,
    primitive_direction,
    vec_add,
    vec_scale,
)
from .polytope import VertexCone
from .rat import Rat, as_int, rat_ceil, rat_den, rat_num, rat_pow


@dataclass(frozen=True)
class ProjectedCone:
    """Image of a vertex cone in V / span(v_i : i in I).

    Coordinates are taken in the basis (v_i : i in I^c) of the target;
    the projected lattice there is spanned by the columns of
    lattice_basis / lattice_den, and `generators` are the projected
    v_i (i in I^c) written in that lattice basis (hence integral).
    """

    amb_dim: int
    lattice_basis: tuple   # k x k integer matrix (columns scaled by 1/lattice_den)
    lattice_den: int
    generators: tuple      # k integer vectors in lattice coordinates


@dataclass(frozen=True)
class SignedUnimodularCone:
    sign: int
    generators: tuple  # k primitive integer vectors forming a Z^k basis

    def __post_init__(self):
        assert abs(det(tuple(zip(*self.generators)))) == 1


def project_cone(cone: VertexCone, subset) -> ProjectedCone:
    """Project a vertex cone along span(v_i : i in subset).

    The projected lattice (image of Z^d) is computed via a column HNF
    of the I^c rows of the inverse generator matrix.
    """
    d = cone.dim
    subset = tuple(sorted(subset))
    comp = tuple(i for i in range(d) if i not in subset)
    k = len(comp)
    if k == 0:
        raise ValueError("projection along the full span is trivial")
    vinv = inverse(cone.generators_matrix())
    rows = [vinv[i] for i in comp]
    den = 1
    for row in rows:
        for x in row:
            den = lcm(den, rat_den(x))
    r_int = tuple(tuple(as_int(x * den) for x in row) for row in rows)
    h, _ = hnf(r_int)
    hk = tuple(row[:k] for row in h)
    g = inverse(hk)
    gens = []
    for j in range(k):
        col = tuple(as_int(g[i][j] * den) for i in range(k))
        gens.append(col)
    return ProjectedCone(amb_dim=k, lattice_basis=hk, lattice_den=den,
                         generators=tuple(gens))


def _short_vector(gen_matrix):
    """Deterministic short vector for the signed decomposition.

    Returns (lam, z) with z = M @ lam a nonzero integer vector and
    max|lam_i| < 1, so every child determinant strictly decreases.
    Among candidates of minimal sup-norm the lexicographically smallest
    coefficient vector (first nonzero entry made positive) wins.
    """
    k = len(gen_matrix)
    d_abs = abs(det(gen_matrix))
    minv = inverse(gen_matrix)
    adj = tuple(tuple(as_int(x * d_abs) for x in row) for row in minv)
    reduced = lll_reduce(adj)
    red_cols = mat_cols(reduced)
    limit = 3 if k <= 4 else (2 if k <= 6 else 1)
    while limit <= 64:
        best = None
        for combo in itertools.product(range(-limit, limit + 1), repeat=k):
            if all(c == 0 for c in combo):
                continue
            vec = [0] * k
            for c, col in zip(combo, red_cols):
                if c:
                    for i in range(k):
                        vec[i] += c * col[i]
            lam = tuple(Rat(x, d_abs) for x in vec)
            sup = max(abs(x) for x in lam)
            if sup >= 1 or sup == 0:
                continue
            first = next(x for x in lam if x != 0)
            if first < 0:
                lam = tuple(-x for x in lam)
            key = (sup, lam)
            if best is None or key < best:
                best = key
        if best is not None:
            lam = best[1]
            z = tuple(as_int(x) for x in mat_vec(gen_matrix, lam))
            return lam, z
        limit *= 2
    raise AssertionError("no short vector found; determinant > 1 expected")


def _signed_decompose(gen_matrix, sign, out):
    d_abs = abs(det(gen_matrix))
    assert d_abs != 0
    if d_abs == 1:
        out.append((sign, gen_matrix))
        return
    lam, z = _short_vector(gen_matrix)
    cols = mat_cols(gen_matrix)
    for i, lam_i in enumerate(lam):
        if lam_i == 0:
            continue
        child_cols = list(cols)
        child_cols[i] = list(z)
        child = mat_from_cols(child_cols)
        assert abs(det(child)) < d_abs
        _signed_decompose(child, sign if lam_i > 0 else -sign, out)


def barvinok_decompose(c: ProjectedCone) -> tuple:
    """Signed unimodular cones with [c] = sum sign_m [c_m] mod line-cones."""
    k = c.amb_dim
    gen_matrix = tuple(zip(*c.generators))
    if abs(det(gen_matrix)) == 1:
        return (SignedUnimodularCone(1, c.generators),)
    minv = inverse(gen_matrix)
    dual_gens = [primitive_direction(minv[i]) for i in range(k)]
    dual_matrix = tuple(zip(*dual_gens))
    pieces = []
    _signed_decompose(dual_matrix, 1, pieces)
    result = []
    for sign, y in pieces:
        yinv = inverse(y)
        gens = tuple(tuple(as_int(x) for x in yinv[i]) for i in range(k))
        result.append(SignedUnimodularCone(sign, gens))
    return tuple(result)


def parallelepiped_points(generators, apex) -> tuple:
    """Lattice points of apex + sum [0,1) v_i, by bounding-box search."""
    k = len(generators)
    gen_matrix = tuple(zip(*generators))
    ginv = inverse(gen_matrix)
    corners = [apex]
    for mask in range(1, 1 << k):
        shift = apex
        for i in range(k):
            if mask >> i & 1:
                shift = vec_add(shift, generators[i])
        corners.append(shift)
    points = []
    ranges = []
    for j in range(k):
        values = [c[j] for c in corners]
        ranges.append(range(rat_ceil(min(values)), rat_floor_plus(max(values))))
    for p in itertools.product(*ranges):
        coords = mat_vec(ginv, vec_add(p, vec_scale(-1, apex)))
        if all(0 <= t < 1 for t in coords):
            points.append(p)
    return tuple(points)


def rat_floor_plus(x) -> int:
    """floor(x) + 1 with the half-open convention for range ends."""
    return rat_num(x) // rat_den(x) + 1


@dataclass(frozen=True)
class GenFunSpecialization:
    """Sum of sign * z^e / prod(1 - z^{d_i}), evaluable at exact points."""

    terms: tuple  # (sign, exponent, denominator exponents)

    def evaluate(self, z):
        z = Rat(z)
        total = Rat(0)
        for sign, e, dens in self.terms:
            value = Rat(sign) * rat_pow(z, e)
            for dexp in dens:
                value /= 1 - rat_pow(z, dexp)
            total += value
        return total


def specialize_genfun_univariate(cones, apex, direction) -> GenFunSpecialization:
    """Substitute exp<xi, x> -> z^<a, x> in the decomposition's S-formula.

    Requires <a, w> != 0 for every generator w (a generic direction).
    Each unimodular affine cone contributes z^{<a, s'>} over
    prod(1 - z^{<a, w_i>}) with s' the lattice point of its half-open
    fundamental parallelepiped.
    """
    apex = tuple(Rat(x) for x in apex)
    terms = []
    for cone in cones:
        dens = []
        for w in cone.generators:
            aw = dot(direction, w)
            if aw == 0:
                raise NonGenericDirectionError(f"direction hits generator {w}")
            dens.append(int(aw))
        w_matrix = tuple(zip(*cone.generators))
        eta = inverse(w_matrix)
        point = tuple(0 for _ in apex)
        for i, w in enumerate(cone.generators):
            c = rat_ceil(dot(eta[i], apex))
            point = vec_add(point, vec_scale(c, w))
        e = as_int(Rat(dot(direction, point)))
        terms.append((cone.sign, e, tuple(dens)))
    return GenFunSpecialization(tuple(terms))
