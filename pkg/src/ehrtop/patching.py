"""Moebius patching function and the parametric short formula.

For a vertex cone s + c and an index subset I, the intermediate
generating function factors as the discrete sum over the projected
cone times the integral along span(v_i : i in I).  Decomposing the
projected cone into signed unimodular cones yields, for each piece, a
term

    alpha * prod_{i in I^c} T({-<eta_i, s>}, <xi, w_i>) / prod_i <xi, w_i>

with alpha = sign * vol(b_I) * (-1)^|I|, w_i = v_i for i in I, and eta
the dual basis of the w's.  Only the residues (zeta_i, q_i) of
-<eta_i, s> depend on the apex, so the same terms serve every dilation
class.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from math import comb, gcd

from .cones import barvinok_decompose, project_cone
from .linalg import det, dot, inverse, mat_vec
from .polytope import VertexCone
from .rat import Rat, rat_den, rat_num


def mobius_lambda(card_i: int, d0: int) -> int:
    """Patching coefficient (-1)^(|I|-d0) * C(|I|-1, d0-1)."""
    if d0 == 0:
        return 1 if card_i == 0 else 0
    if card_i < d0:
        raise ValueError("subset smaller than d0")
    return (-1) ** (card_i - d0) * comb(card_i - 1, d0 - 1)


@dataclass(frozen=True)
class PatchSubset:
    indices: tuple  # sorted, 0-based
    weight: int


def enumerate_poset(d: int, d0: int) -> tuple:
    """All subsets I of {0..d-1} with |I| >= d0, with their weights.

    For d0 = 0 the only subset carrying weight is the empty one.
    """
    if not 0 <= d0 <= d:
        raise ValueError("need 0 <= d0 <= d")
    if d0 == 0:
        return (PatchSubset((), 1),)
    subsets = []
    for size in range(d0, d + 1):
        lam = mobius_lambda(size, d0)
        for combo in itertools.combinations(range(d), size):
            subsets.append(PatchSubset(combo, lam))
    return tuple(subsets)


@dataclass(frozen=True)
class ShortTerm:
    """One summand of the parametric short formula."""

    alpha: object          # sign * vol(b_I) * (-1)^|I|, possibly times lambda(I)
    subset: tuple          # I, sorted 0-based indices
    w: tuple               # d rational vectors; w_i = v_i for i in I
    eta: tuple             # d rational vectors, dual basis of the w's
    residues: tuple        # ((i, (zeta_i, q_i)) for i in I^c, sorted by i)

    def scaled(self, factor) -> "ShortTerm":
        return ShortTerm(self.alpha * factor, self.subset, self.w,
                         self.eta, self.residues)


def sublattice_volume(cone: VertexCone, subset) -> int:
    """Index of sum Z v_i (i in subset) inside its saturation.

    Computed as the gcd of all |I| x |I| minors of the generator
    columns; equals the lattice volume of the parallelepiped b_I.
    """
    subset = tuple(sorted(subset))
    if not subset:
        return 1
    size = len(subset)
    cols = [cone.generators[i] for i in subset]
    g = 0
    for rows in itertools.combinations(range(cone.dim), size):
        minor = det(tuple(tuple(col[r] for col in cols) for r in rows))
        g = gcd(g, abs(minor))
    assert g > 0, "generators in subset are dependent"
    return g


def _residue_data(eta_i, apex):
    """(zeta, q) with {-<eta_i, s> n} = (1/q) {zeta n}_q."""
    c = -dot(eta_i, apex)
    q = rat_den(c)
    zeta = rat_num(c * q) % q
    return int(zeta), q


@lru_cache(maxsize=None)
def intermediate_short_formula(cone: VertexCone, subset) -> tuple:
    """Short-formula terms for the intermediate generating function.

    subset = {0..d-1} yields the single integral term; otherwise the
    projected cone is decomposed and each signed unimodular piece is
    mapped back to ambient coordinates.
    """
    d = cone.dim
    subset = tuple(sorted(subset))
    comp = tuple(i for i in range(d) if i not in subset)
    v_matrix = cone.generators_matrix()
    if not comp:
        alpha = Rat((-1) ** d * abs(det(v_matrix)))
        w = tuple(tuple(Rat(x) for x in g) for g in cone.generators)
        eta = inverse(v_matrix)
        return (ShortTerm(alpha, subset, w, eta, ()),)

    vol = sublattice_volume(cone, subset)
    vinv = inverse(v_matrix)
    projected = project_cone(cone, subset)
    hk, den = projected.lattice_basis, projected.lattice_den
    k = projected.amb_dim
    sign_i = Rat(vol * (-1) ** len(subset))

    terms = []
    for piece in barvinok_decompose(projected):
        w = [None] * d
        bcoords = []
        for i in subset:
            w[i] = tuple(Rat(x) for x in cone.generators[i])
        for j, u in enumerate(piece.generators):
            beta = tuple(Rat(x, den) for x in mat_vec(hk, u))
            bcoords.append(beta)
            vec = tuple(Rat(0) for _ in range(d))
            for pos, b in enumerate(beta):
                if b:
                    base = cone.generators[comp[pos]]
                    vec = tuple(x + b * y for x, y in zip(vec, base))
            w[comp[j]] = vec
        # eta for i in I is the corresponding row of V^-1; for i in I^c
        # combine rows through the inverse of the basis-change block.
        ck = tuple(zip(*bcoords))  # k x k, column j = coords of w_{comp[j]}
        ck_inv = inverse(ck)
        eta = [None] * d
        for i in subset:
            eta[i] = vinv[i]
        residues = []
        for pos, i in enumerate(comp):
            row = tuple(Rat(0) for _ in range(d))
            for j in range(k):
                factor = ck_inv[pos][j]
                if factor:
                    row = tuple(x + factor * y for x, y in zip(row, vinv[comp[j]]))
            assert all(rat_den(x) == 1 for x in row), "eta must be integral on I^c"
            eta[i] = row
            zeta, q = _residue_data(row, cone.apex)
            assert cone.apex_period % q == 0, "residue modulus must divide q_s"
            residues.append((i, (zeta, q)))
        terms.append(ShortTerm(Rat(piece.sign) * sign_i, subset, tuple(w),
                               tuple(eta), tuple(residues)))
    return tuple(terms)


def patched_terms(cone: VertexCone, d0: int) -> tuple:
    """Terms of the patched approximation, alpha scaled by lambda(I)."""
    out = []
    for patch in enumerate_poset(cone.dim, d0):
        if patch.weight == 0:
            continue
        for term in intermediate_short_formula(cone, patch.indices):
            out.append(term.scaled(patch.weight))
    return tuple(out)


def _render_linear(coeffs, symbols) -> str:
    parts = []
    for c, sym in zip(coeffs, symbols):
        c = Rat(c)
        if c == 0:
            continue
        if c == 1:
            piece = sym
        elif c == -1:
            piece = f"-{sym}"
        else:
            piece = f"{c}*{sym}"
        if parts and not piece.startswith("-"):
            parts.append("+" + piece)
        else:
            parts.append(piece)
    return "".join(parts) or "0"


def render_short_term(term: ShortTerm, point_symbols=None, form_symbols=None) -> str:
    """Debug rendering in T-product-over-denominator form."""
    d = len(term.w)
    svars = point_symbols or tuple(f"s{i+1}" for i in range(d))
    xvars = form_symbols or tuple(f"x{i+1}" for i in range(d))
    comp = [i for i in range(d) if i not in term.subset]
    tfactors = []
    for i in comp:
        arg = _render_linear(tuple(-x for x in term.eta[i]), svars)
        tfactors.append(f"T({{{arg}}}, {_render_linear(term.w[i], xvars)})")
    dens = [f"({_render_linear(term.w[i], xvars)})" for i in range(d)]
    lead = f"{term.alpha}"
    body = " ".join(tfactors) if tfactors else "1"
    return f"{lead} * {body} / ({'*'.join(dens)})"
