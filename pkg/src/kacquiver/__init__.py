"""Exact Kac/Hua generating functions and the r(0) criterion for quivers."""
from .coeff import LaurentPoly, RationalFunction, phi_m
from .engine import (
    CriterionRecord,
    KacSeries,
    a_series,
    check_criterion,
    compute_series,
    i_series,
    m_series,
    phi_d_count,
    pow_generalized,
    r_lambda,
    r_series,
)
from .peterson import compare_with_hua, denominator_check, peterson_multiplicities
from .quiver import Quiver, load_quiver

__all__ = [
    "CriterionRecord",
    "KacSeries",
    "LaurentPoly",
    "Quiver",
    "RationalFunction",
    "a_series",
    "check_criterion",
    "compare_with_hua",
    "compute_series",
    "denominator_check",
    "i_series",
    "load_quiver",
    "m_series",
    "peterson_multiplicities",
    "phi_d_count",
    "phi_m",
    "pow_generalized",
    "r_lambda",
    "r_series",
]
