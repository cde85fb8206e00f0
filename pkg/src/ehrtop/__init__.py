"""Exact top coefficients of weighted Ehrhart quasi-polynomials.

Computes the k0+1 highest coefficients of
n |-> sum_{x in n*p} <ell, x>^M / M!  for a rational simple polytope p,
in closed form as step polynomials of the dilation n, plus an exact
brute-force oracle to certify results on small instances.
"""

from .engine import (
    EhrhartTopResult,
    PerturbationVector,
    choose_perturbation,
    evaluate_at,
    integral_power_linear_form,
    leading_is_integral,
    top_coefficients,
    top_coefficients_multi,
)
from .errors import (
    ConesRequiredError,
    EhrtopError,
    NonGenericDirectionError,
    NotFullDimensionalError,
    OracleBudgetError,
    RankDeficientError,
    SingularError,
    ZeroLinearFormError,
    ZeroVectorError,
)
from .oracle import interpolate, verify_top, weighted_count
from .polytope import (
    PowerLinearWeight,
    SimplePolytope,
    VertexCone,
    polytope_period,
    tangent_cones,
)
from .rat import Rat
from .steppoly import StepPolynomial, eval_step

__version__ = "0.1.0"

__all__ = [
    "EhrhartTopResult",
    "PerturbationVector",
    "PowerLinearWeight",
    "Rat",
    "SimplePolytope",
    "StepPolynomial",
    "VertexCone",
    "choose_perturbation",
    "evaluate_at",
    "eval_step",
    "integral_power_linear_form",
    "interpolate",
    "leading_is_integral",
    "polytope_period",
    "tangent_cones",
    "top_coefficients",
    "top_coefficients_multi",
    "verify_top",
    "weighted_count",
    "EhrtopError",
    "ConesRequiredError",
    "NonGenericDirectionError",
    "NotFullDimensionalError",
    "OracleBudgetError",
    "RankDeficientError",
    "SingularError",
    "ZeroLinearFormError",
    "ZeroVectorError",
]
