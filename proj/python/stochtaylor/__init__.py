"""Exact Fourier-Legendre coefficients for iterated Ito integrals, truncation orders and
strong Taylor schemes."""

from fractions import Fraction

from . import _stochtaylor as _ext
from ._stochtaylor import (
    CapExceeded,
    DomainError,
    StoreError,
    check_hypothesis,
    exact_error,
    format_table,
    legendre_p,
    minimal_order,
    mse_experiment,
    problem_names,
    reproduce_table,
    sample_ito,
    scaled_coefficient,
    scheme_plan,
    strong_order,
)

__all__ = [
    "CapExceeded",
    "DomainError",
    "StoreError",
    "bar_coefficient",
    "check_hypothesis",
    "exact_error",
    "exact_norm",
    "format_table",
    "legendre_p",
    "minimal_order",
    "mse_experiment",
    "normalized_error_exact",
    "problem_names",
    "reproduce_table",
    "sample_ito",
    "scaled_coefficient",
    "scheme_plan",
    "strong_order",
]


def bar_coefficient(profile, j):
    return Fraction(_ext.bar_coefficient(profile, list(j)))


def exact_norm(profile):
    return Fraction(_ext.exact_norm(profile))


def normalized_error_exact(profile, pattern, p):
    return Fraction(_ext.normalized_error_exact(profile, pattern, p))
