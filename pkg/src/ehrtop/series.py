"""Bernoulli polynomials and truncated bivariate (t, eps) series.

The series live in Q[r_1..r_k][t, eps^{+-1}] with step-polynomial
coefficients: t tracks the grading of the generating function, eps the
perturbation of the linear form.  Powers of t are capped at t_cap >= 0,
powers of eps at eps_cap; negative eps degrees (from perturbed zero
denominators) are kept exactly, they are bounded below by -dim.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import comb, factorial

from .errors import ZeroLinearFormError
from .rat import Rat, rat_pow
from .steppoly import StepPolynomial, eval_step

__all__ = [
    "BernoulliPolynomial",
    "bernoulli",
    "bernoulli_number",
    "TruncatedSeries",
    "t_series",
    "truncated_mul",
    "geometric_inverse",
    "eval_step",
]


@lru_cache(maxsize=None)
def bernoulli_number(j: int):
    """Bernoulli number B_j with the B_1 = -1/2 convention."""
    if j == 0:
        return Rat(1)
    # sum_{i=0}^{j} C(j+1, i) B_i = 0 for j >= 1
    acc = Rat(0)
    for i in range(j):
        acc += comb(j + 1, i) * bernoulli_number(i)
    return -acc / (j + 1)


@dataclass(frozen=True)
class BernoulliPolynomial:
    """B_j(tau) as a dense tuple of coefficients, ascending in tau."""

    degree: int
    coefficients: tuple

    def __call__(self, x):
        acc = Rat(0)
        for c in reversed(self.coefficients):
            acc = acc * x + c
        return acc

    def of_step(self, tau: StepPolynomial) -> StepPolynomial:
        """Compose with a step polynomial argument."""
        acc = StepPolynomial.zero()
        for c in reversed(self.coefficients):
            acc = acc * tau + StepPolynomial.const(c)
        return acc


@lru_cache(maxsize=None)
def bernoulli(j: int) -> BernoulliPolynomial:
    """B_j(tau) = sum_i C(j, i) B_{j-i} tau^i, exactly."""
    if j < 0:
        raise ValueError("Bernoulli degree must be nonnegative")
    coeffs = tuple(comb(j, i) * bernoulli_number(j - i) for i in range(j + 1))
    return BernoulliPolynomial(j, coeffs)


class TruncatedSeries:
    """Sparse series sum c[td, ed] * t^td * eps^ed, c a StepPolynomial."""

    __slots__ = ("t_cap", "eps_cap", "coeff")

    def __init__(self, t_cap: int, eps_cap: int, coeff=None):
        self.t_cap = t_cap
        self.eps_cap = eps_cap
        self.coeff = {}
        for key, poly in (coeff or {}).items():
            td, ed = key
            if td < 0 or td > t_cap or ed > eps_cap:
                continue
            if poly:
                self.coeff[key] = poly

    @staticmethod
    def constant(value, t_cap: int, eps_cap: int) -> "TruncatedSeries":
        poly = value if isinstance(value, StepPolynomial) else StepPolynomial.const(value)
        return TruncatedSeries(t_cap, eps_cap, {(0, 0): poly})

    def coefficient(self, t_deg: int, eps_deg: int) -> StepPolynomial:
        return self.coeff.get((t_deg, eps_deg), StepPolynomial.zero())

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check_caps(other)
        coeff = dict(self.coeff)
        for key, poly in other.coeff.items():
            coeff[key] = coeff.get(key, StepPolynomial.zero()) + poly
        return TruncatedSeries(self.t_cap, self.eps_cap, coeff)

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            scaled = {k: p * other for k, p in self.coeff.items()}
            return TruncatedSeries(self.t_cap, self.eps_cap, scaled)
        self._check_caps(other)
        out = {}
        for (t1, e1), p1 in self.coeff.items():
            for (t2, e2), p2 in other.coeff.items():
                td, ed = t1 + t2, e1 + e2
                if td > self.t_cap or ed > self.eps_cap:
                    continue
                key = (td, ed)
                prod = p1 * p2
                out[key] = out.get(key, StepPolynomial.zero()) + prod
        result = TruncatedSeries(self.t_cap, self.eps_cap, out)
        if __debug__:
            for (td, _), poly in result.coeff.items():
                assert poly.max_variable_degree() <= td, \
                    "residue degree exceeded t-degree"
        return result

    __rmul__ = __mul__

    def _check_caps(self, other):
        if (self.t_cap, self.eps_cap) != (other.t_cap, other.eps_cap):
            raise ValueError("incompatible truncation caps")

    def __eq__(self, other):
        return (isinstance(other, TruncatedSeries)
                and self.t_cap == other.t_cap
                and self.eps_cap == other.eps_cap
                and self.coeff == other.coeff)

    def __repr__(self):
        parts = [f"({poly.render()})*t^{td}*eps^{ed}"
                 for (td, ed), poly in sorted(self.coeff.items())]
        return "TruncatedSeries(" + (" + ".join(parts) or "0") + ")"


def truncated_mul(a: TruncatedSeries, b: TruncatedSeries) -> TruncatedSeries:
    return a * b


def t_series(tau: StepPolynomial, base, pert, t_cap: int, eps_cap: int) -> TruncatedSeries:
    """Truncation of T(tau, <t*(l + eps*l'), w>) = -sum_j B_j(tau) x^j / j!.

    `base` and `pert` carry <l, w> and <l', w>; the j-th power of
    (base + pert*eps) is expanded binomially and cut at eps_cap.
    """
    base = Rat(base)
    pert = Rat(pert)
    coeff = {}
    for j in range(t_cap + 1):
        bj = bernoulli(j).of_step(tau) * Rat(-1, factorial(j))
        if not bj:
            continue
        for u in range(min(j, eps_cap) + 1):
            scalar = comb(j, u) * rat_pow(base, j - u) * rat_pow(pert, u)
            if scalar != 0:
                coeff[(j, u)] = coeff.get((j, u), StepPolynomial.zero()) + bj * scalar
    return TruncatedSeries(t_cap, eps_cap, coeff)


def geometric_inverse(base, pert, t_cap: int, eps_cap: int) -> TruncatedSeries:
    """Expansion of 1 / (base + pert*eps) to eps_cap.

    base != 0 gives the geometric series; base == 0 gives the single
    term eps^{-1} / pert.  Both zero means the perturbation failed.
    """
    base = Rat(base)
    pert = Rat(pert)
    if base == 0 and pert == 0:
        raise ZeroLinearFormError("linear form and perturbation both vanish")
    coeff = {}
    if base == 0:
        coeff[(0, -1)] = StepPolynomial.const(1 / pert)
    else:
        ratio = -pert / base
        value = 1 / base
        for u in range(eps_cap + 1):
            if value == 0:
                break
            coeff[(0, u)] = StepPolynomial.const(value)
            value *= ratio
    return TruncatedSeries(t_cap, eps_cap, coeff)
