"""Mahler measures of Laurent polynomials and rational functions.

Exact Laurent-polynomial arithmetic, numerical torus integration with a
Jensen-reduced integrand, special values for closed forms, and the
substitution ``x -> lam x^k conj(g)(1/x) / g(x)`` that preserves the measure.
"""

__version__ = "0.1.0"

from .expr import ExprSyntaxError, parse, parse_poly, print_expr
from .measure import (
    MeasureError,
    MeasureResult,
    QuadConfig,
    estimate_error,
    measure,
    measure_direct,
    measure_jensen_reduced,
    measure_lattice,
    verify_identity,
)
from .poly import GaussianRational, LaurentPoly, PoleError, PolyError, RationalFn, eval_complex
from .roots import (
    RootFindingError,
    classify_gamma,
    find_roots,
    jensen_measure_1d,
    measure_alpha_f_plus_beta_g,
)
from .special import bernoulli, closed_form, dirichlet_L, named_constant, zeta
from .transform import (
    IdentityRecord,
    TransformSpec,
    apply_transform,
    build_family,
    identity_catalog,
    reciprocal_pair,
    validate_spec,
    verify_invariance,
)

__all__ = [
    "ExprSyntaxError", "parse", "parse_poly", "print_expr",
    "MeasureError", "MeasureResult", "QuadConfig", "estimate_error", "measure", "measure_direct",
    "measure_jensen_reduced", "measure_lattice", "verify_identity",
    "GaussianRational", "LaurentPoly", "PoleError", "PolyError", "RationalFn", "eval_complex",
    "RootFindingError", "classify_gamma", "find_roots", "jensen_measure_1d",
    "measure_alpha_f_plus_beta_g",
    "bernoulli", "closed_form", "dirichlet_L", "named_constant", "zeta",
    "IdentityRecord", "TransformSpec", "apply_transform", "build_family", "identity_catalog",
    "reciprocal_pair", "validate_spec", "verify_invariance",
]
