"""Exact rational oracles, independent of the expansion code under test."""

from fractions import Fraction

import numpy as np


def rational_sum(data) -> Fraction:
    """Exact sum via big-rational accumulation of the scaled significands."""
    total = Fraction(0)
    for x in np.asarray(data, np.float64):
        total += Fraction(float(x))
    return total


def rational_rel_error(approx: float, data) -> Fraction:
    ref = rational_sum(data)
    return (Fraction(float(approx)) - ref) / ref


def sequential_roundoffs(data):
    """Per-step round-offs of the running fl-sum, computed exactly.

    Returns (final rounded sum, list of exact round-offs c_i where
    c_i = fl(s + y_i) - (s + y_i), so exact_sum = final - sum(c_i)).
    """
    t = np.asarray(data).dtype.type
    s = t(0)
    offs = []
    for y in data:
        new = t(s + y)
        offs.append(Fraction(float(new)) - (Fraction(float(s)) + Fraction(float(y))))
        s = new
    return s, offs
