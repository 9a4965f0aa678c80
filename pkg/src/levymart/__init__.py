"""Exact polynomial martingales, cross moments and reversed-martingale analysis for Levy processes."""

from .cumulants import (
    Atom,
    CumulantSpec,
    KolmogorovMeasure,
    classify_measure,
    cumulants_from_measure,
    validate_cumulants,
)
from .martingales import conditional_expectation, cross_moment, martingale_poly, product_expand_M1, product_expand_M2
from .moments import moments
from .orthogonal import connection_coeffs, orthogonal_basis, orthogonality_witness
from .ratpoly import MultiPoly, make_rational, poly_derivative, poly_eval, poly_mul
from .reversed import (
    classify_combination,
    closed_form_eval,
    cumulant_closure,
    mu_functions,
    ode_series,
    reversed_feasibility,
    tangent_numbers,
)
from .simulator import (
    empirical_moment_check,
    harness_mc_check,
    martingale_mc_check,
    reversed_mc_check,
    simulate_paths,
)

__all__ = [
    "Atom",
    "CumulantSpec",
    "KolmogorovMeasure",
    "MultiPoly",
    "classify_combination",
    "classify_measure",
    "closed_form_eval",
    "conditional_expectation",
    "connection_coeffs",
    "cross_moment",
    "cumulant_closure",
    "cumulants_from_measure",
    "empirical_moment_check",
    "harness_mc_check",
    "make_rational",
    "martingale_mc_check",
    "martingale_poly",
    "moments",
    "mu_functions",
    "ode_series",
    "orthogonal_basis",
    "orthogonality_witness",
    "poly_derivative",
    "poly_eval",
    "poly_mul",
    "product_expand_M1",
    "product_expand_M2",
    "reversed_feasibility",
    "reversed_mc_check",
    "simulate_paths",
    "tangent_numbers",
    "validate_cumulants",
]
