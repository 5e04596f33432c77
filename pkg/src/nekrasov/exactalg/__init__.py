"""Exact arithmetic: linear forms, sparse polynomials, factored and canonical rational functions."""
from .errors import (DivideByZeroError, DivideByZeroScalarError, InadmissiblePointError,
                     SamplingExhaustedError, VariableMismatchError,
                     ZeroDenominatorAfterSubstitutionError, ZeroFormError)
from .factored import FactoredRational, fr_div, fr_expand, fr_mul
from .linear import LinearForm, lf_canonical
from .poly import MultiPoly
from .ratfunc import (RationalFunction, rf_add, rf_div, rf_mul, rf_sub, rf_substitute,
                      symbolic_equal)
from .sampling import EqResult, EvalPoint, PointSampler, randomized_identity, rf_eq

__all__ = [
    "DivideByZeroError", "DivideByZeroScalarError", "EqResult", "EvalPoint", "FactoredRational",
    "InadmissiblePointError", "LinearForm", "MultiPoly", "PointSampler", "RationalFunction",
    "SamplingExhaustedError", "VariableMismatchError", "ZeroDenominatorAfterSubstitutionError",
    "ZeroFormError", "fr_div", "fr_expand", "fr_mul", "lf_canonical", "randomized_identity",
    "rf_add", "rf_div", "rf_eq", "rf_mul", "rf_sub", "rf_substitute", "symbolic_equal",
]
