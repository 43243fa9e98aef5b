"""Twofold (value + error) summation with error-free transformations.

A twofold sum carries the usual floating-point result plus an error
channel tracking the accumulated round-off, at near-direct-summation
cost.  The package provides the EFT primitives, five summation / dot
kernels in sequential, unrolled and lane-vectorized flavors, an exact
expansion oracle, deterministic LCG data generators, and the accuracy and
throughput harnesses that validate the error channel.
"""

from .eft import Twofold, fast_two_sum, two_sum, rounding_canary
from .expansion import Expansion, exact_dot, exact_sum, expansion_add, relative_error
from .kernels import (
    Flavor,
    Method,
    SumResult,
    dot_direct,
    dot_kahan,
    dot_twofold_fast,
    dot_twofold_rigorous,
    dot_wide,
    run_flavor,
    sum_direct,
    sum_kahan,
    sum_twofold_fast,
    sum_twofold_rigorous,
    sum_wide,
)
from .lcg import LcgKind, LcgState, fill, next_raw, uniform01, uniform_sym

__version__ = "0.1.0"

__all__ = [
    "Twofold", "fast_two_sum", "two_sum", "rounding_canary",
    "Expansion", "exact_sum", "exact_dot", "expansion_add", "relative_error",
    "Method", "Flavor", "SumResult", "run_flavor",
    "sum_direct", "sum_wide", "sum_twofold_fast", "sum_twofold_rigorous",
    "sum_kahan", "dot_direct", "dot_wide", "dot_twofold_fast",
    "dot_twofold_rigorous", "dot_kahan",
    "LcgKind", "LcgState", "next_raw", "uniform01", "uniform_sym", "fill",
    "__version__",
]
