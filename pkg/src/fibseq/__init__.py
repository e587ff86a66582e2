"""Exact and numerical tools for Fibonacci representations f_(n+2) = T(f_n + f_(n+1))."""
from .errors import FibseqError, NoRepresentation
from .fibrep import (
    BinomialPlan,
    Extension,
    FibOperator,
    binomial_plan,
    closed_form_iterate,
    construct,
    construct_alternating,
    construct_half_f3,
    verify,
)
from .sequences import DerivedSpec, SequenceWindow, Tail, canonical, derive, random_window

__all__ = [
    "BinomialPlan",
    "DerivedSpec",
    "Extension",
    "FibOperator",
    "FibseqError",
    "NoRepresentation",
    "SequenceWindow",
    "Tail",
    "binomial_plan",
    "canonical",
    "closed_form_iterate",
    "construct",
    "construct_alternating",
    "construct_half_f3",
    "derive",
    "random_window",
    "verify",
]
