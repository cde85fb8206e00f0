"""Assembly of the top Ehrhart coefficients as step polynomials.

For a weight <ell, x>^M / M! and depth k0, each vertex cone contributes
its patched short-formula terms.  Per term, the series

    <ell + eps ell', s>^m / m!
    * prod_{i in I^c} T(tau_i(n), <t (ell + eps ell'), w_i>)
    * prod_{i=1..d} 1 / <ell + eps ell', w_i>

is expanded with t capped at k0 and eps capped at the term's own count
U of vectors w_i orthogonal to ell; the coefficient of t^k eps^0 lands
in E_{M+d-k}.  The same perturbation vector ell' serves every cone and
term of a run.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from math import factorial

from .errors import ZeroLinearFormError
from .linalg import det, dot
from .patching import patched_terms
from .polytope import PowerLinearWeight, SimplePolytope, polytope_period, tangent_cones
from .rat import Rat, rat_pow
from .series import TruncatedSeries, geometric_inverse, t_series
from .steppoly import StepPolynomial


@dataclass(frozen=True)
class PerturbationVector:
    ellpert: tuple
    audit: tuple  # the vectors w with <ell, w> = 0 this choice repairs


@dataclass(frozen=True)
class EhrhartTopResult:
    M: int
    d: int
    k0: int
    period_q: int
    coeffs: dict  # m -> StepPolynomial, highest degree first

    def evaluate_at(self, n: int) -> dict:
        return {m: poly.eval(n) for m, poly in self.coeffs.items()}

    def partial_sum(self, n: int):
        """sum of E_m(n) n^m over the computed degrees."""
        total = Rat(0)
        for m, poly in self.coeffs.items():
            total += poly.eval(n) * rat_pow(Rat(n), m)
        return total


def choose_perturbation(ell, all_w) -> PerturbationVector:
    """One ell' with <ell', w> != 0 for every w orthogonal to ell.

    Tries the moment-curve candidates (1, t, t^2, ...) for t = 1, 2, ...;
    each nonzero w rules out finitely many t, so this terminates.
    """
    ell = tuple(Rat(x) for x in ell)
    d = len(ell)
    orthogonal = tuple(w for w in all_w if dot(ell, w) == 0)
    t = 1
    while True:
        candidate = tuple(rat_pow(Rat(t), j) for j in range(d))
        if all(dot(candidate, w) != 0 for w in orthogonal):
            return PerturbationVector(candidate, orthogonal)
        t += 1


@dataclass(frozen=True)
class PreparedPolytope:
    """Vertex cones and their patched terms, reusable across weights."""

    polytope: SimplePolytope
    k0: int
    d0: int
    period_q: int
    cones: tuple
    vertex_terms: tuple  # per vertex, tuple of ShortTerm with lambda folded in


def prepare(p: SimplePolytope, k0: int, threads: int | None = None) -> PreparedPolytope:
    if k0 < 0:
        raise ValueError("k0 must be nonnegative")
    d = p.dim
    d0 = max(d - k0, 0)
    cones = tangent_cones(p)
    if threads and threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            terms = tuple(pool.map(lambda c: patched_terms(c, d0), cones))
    else:
        terms = tuple(patched_terms(c, d0) for c in cones)
    return PreparedPolytope(p, k0, d0, polytope_period(p), cones, terms)


def _collect_w(prep: PreparedPolytope):
    seen = []
    known = set()
    for terms in prep.vertex_terms:
        for term in terms:
            for w in term.w:
                if w not in known:
                    known.add(w)
                    seen.append(w)
    return tuple(seen)


def _zero_result(prep: PreparedPolytope, M: int) -> EhrhartTopResult:
    d = prep.polytope.dim
    lo = max(M + d - prep.k0, 0)
    coeffs = {m: StepPolynomial.zero() for m in range(M + d, lo - 1, -1)}
    return EhrhartTopResult(M, d, prep.k0, prep.period_q, coeffs)


def _power_coeff(base, pert, m: int, u: int):
    """Coefficient of eps^u in <ell + eps ell', s>^m / m!."""
    return rat_pow(base, m - u) * rat_pow(pert, u) / (factorial(u) * factorial(m - u))


def assemble(prep: PreparedPolytope, weight: PowerLinearWeight,
             perturbation: PerturbationVector | None = None) -> EhrhartTopResult:
    d = prep.polytope.dim
    M = weight.power
    ell = weight.ell
    if M >= 1 and all(x == 0 for x in ell):
        return _zero_result(prep, M)

    all_w = _collect_w(prep)
    if perturbation is None:
        perturbation = choose_perturbation(ell, all_w)
    else:
        bad = [w for w in all_w if dot(ell, w) == 0 and dot(perturbation.ellpert, w) == 0]
        if bad:
            raise ZeroLinearFormError(f"perturbation fails on {bad[0]}")
    lp = perturbation.ellpert

    k_max = min(prep.k0, M + d)
    lo = max(M + d - prep.k0, 0)
    coeffs = {m: StepPolynomial.zero() for m in range(M + d, lo - 1, -1)}

    for cone, terms in zip(prep.cones, prep.vertex_terms):
        s = cone.apex
        base_s = dot(ell, s)
        pert_s = dot(lp, s)
        for term in terms:
            pairings = [(dot(ell, w), dot(lp, w)) for w in term.w]
            u_cap = sum(1 for b, _ in pairings if b == 0)
            caps = (k_max, u_cap)
            series = TruncatedSeries.constant(1, *caps)
            res_map = dict(term.residues)
            comp = [i for i in range(d) if i not in term.subset]
            for i in comp:
                zeta, q = res_map[i]
                tau = StepPolynomial.residue(zeta, q) * Rat(1, q)
                series = series * t_series(tau, pairings[i][0], pairings[i][1], *caps)
            for b, pe in pairings:
                series = series * geometric_inverse(b, pe, *caps)
            for k in range(k_max + 1):
                m = M + d - k
                acc = StepPolynomial.zero()
                for u in range(min(m, u_cap) + 1):
                    cell = series.coefficient(k, -u)
                    if cell:
                        acc = acc + cell * _power_coeff(base_s, pert_s, m, u)
                if acc:
                    coeffs[m] = coeffs[m] + acc * term.alpha

    top = coeffs[M + d]
    assert top.is_constant(), "leading coefficient must be residue-free"
    if __debug__:
        for m, poly in coeffs.items():
            assert poly.total_degree() <= M + d - m
    return EhrhartTopResult(M, d, prep.k0, prep.period_q, coeffs)


def top_coefficients(p: SimplePolytope, weight: PowerLinearWeight, k0: int,
                     perturbation: PerturbationVector | None = None,
                     threads: int | None = None) -> EhrhartTopResult:
    """The k0+1 highest coefficients of E(p, ell, M; n) as step polynomials."""
    prep = prepare(p, k0, threads=threads)
    return assemble(prep, weight, perturbation=perturbation)


def top_coefficients_multi(p: SimplePolytope, weights, k0: int,
                           threads: int | None = None) -> EhrhartTopResult:
    """Sum of runs for a weight given as a list of powers of linear forms.

    Coefficients are only reported in the range valid for every summand,
    m >= max(M_i) + d - k0.
    """
    weights = tuple(weights)
    if not weights:
        raise ValueError("at least one weight required")
    prep = prepare(p, k0, threads=threads)
    results = [assemble(prep, w) for w in weights]
    d = p.dim
    m_top = max(w.power for w in weights) + d
    lo = max(m_top - k0, 0)
    coeffs = {}
    for m in range(m_top, lo - 1, -1):
        total = StepPolynomial.zero()
        for res in results:
            total = total + res.coeffs.get(m, StepPolynomial.zero())
        coeffs[m] = total
    return EhrhartTopResult(m_top - d, d, k0, prep.period_q, coeffs)


def evaluate_at(result: EhrhartTopResult, n: int) -> dict:
    return result.evaluate_at(n)


def integral_power_linear_form(p: SimplePolytope, weight: PowerLinearWeight):
    """integral over p of <ell, x>^M / M! dx, via Brion's formula.

    Uses only the integral terms (I = {1..d}) of the vertex cones, with
    the same eps-perturbation treatment as the main engine; independent
    of the patching and decomposition stages.
    """
    cones = tangent_cones(p)
    d = p.dim
    M = weight.power
    ell = weight.ell
    gens = []
    for cone in cones:
        gens.extend(cone.generators)
    pert = choose_perturbation(ell, tuple(dict.fromkeys(gens)))
    lp = pert.ellpert
    m = M + d
    total = Rat(0)
    for cone in cones:
        s = cone.apex
        alpha = Rat((-1) ** d * abs(det(cone.generators_matrix())))
        pairings = [(dot(ell, g), dot(lp, g)) for g in cone.generators]
        u_cap = sum(1 for b, _ in pairings if b == 0)
        series = TruncatedSeries.constant(1, 0, u_cap)
        for b, pe in pairings:
            series = series * geometric_inverse(b, pe, 0, u_cap)
        acc = Rat(0)
        for u in range(min(m, u_cap) + 1):
            cell = series.coefficient(0, -u)
            if cell:
                acc += cell.constant_value() * _power_coeff(dot(ell, s), dot(lp, s), m, u)
        total += alpha * acc
    return total


def leading_is_integral(result: EhrhartTopResult, p: SimplePolytope,
                        weight: PowerLinearWeight) -> bool:
    """Check E_{M+d} against the independently computed integral."""
    top = result.coeffs[result.M + result.d]
    if not top.is_constant():
        return False
    return top.constant_value() == integral_power_linear_form(p, weight)
