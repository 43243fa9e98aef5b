"""Exact summation oracle via non-overlapping floating-point expansions.

An expansion is an ordered list of binary64 components, increasing in
magnitude and pairwise non-overlapping, whose exact (real-number) sum is
the represented value.  Growing an expansion by one float is a cascade of
two_sum steps, so the result stays exact; this gives an exact reference
sum for the accuracy experiments without arbitrary-precision arithmetic.

For binary32 inputs every element widens exactly to binary64, so the
oracle is exact for the true sum.  For binary64 dot products each product
is rounded once to binary64 before exact accumulation: the oracle is then
exact for the sum of rounded products, and every comparison made against
it feeds the method under test the identical addends.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from numba import njit

from .eft import two_sum

# Max components a binary64 expansion can need (full exponent range / 53
# bits per component, with slack).
_MAX_COMPONENTS = 64


@dataclass(frozen=True)
class Expansion:
    """Non-overlapping expansion; components in increasing magnitude.

    The canonical zero expansion has an empty component tuple.
    """

    components: tuple

    @property
    def is_zero(self) -> bool:
        return not self.components

    @property
    def hi(self) -> float:
        """Leading (largest-magnitude) component; 0.0 for the zero expansion."""
        return self.components[-1] if self.components else 0.0

    @property
    def lo(self) -> float:
        """Second-largest component; 0.0 if absent."""
        return self.components[-2] if len(self.components) > 1 else 0.0

    def __float__(self) -> float:
        # math.fsum returns the correctly rounded sum of the components.
        return math.fsum(self.components)

    def add(self, v: float) -> "Expansion":
        """Grow the expansion by one finite binary64 value, exactly."""
        q = float(v)
        comps = []
        for c in self.components:
            q, y = two_sum(q, c)
            if y != 0.0:
                comps.append(y)
        if q != 0.0:
            comps.append(q)
        return Expansion(tuple(comps))


ZERO = Expansion(())


def expansion_add(e: Expansion, v: float) -> Expansion:
    """Functional alias for :meth:`Expansion.add`."""
    return e.add(v)


@njit(cache=True)
def _exact_sum_kernel(data, comp):
    m = 0
    for i in range(data.shape[0]):
        q = data[i]
        k = 0
        for j in range(m):
            b = comp[j]
            x = q + b
            bv = x - q
            qv = x - bv
            y = (q - qv) + (b - bv)
            q = x
            if y != 0.0:
                comp[k] = y
                k += 1
        if q != 0.0:
            if k >= comp.shape[0]:
                raise RuntimeError("expansion component buffer overflow")
            comp[k] = q
            k += 1
        m = k
    return m


def exact_sum(data: np.ndarray) -> Expansion:
    """Exact sum of a float32 or float64 array as an expansion."""
    data64 = np.ascontiguousarray(data, dtype=np.float64)
    comp = np.zeros(_MAX_COMPONENTS, np.float64)
    m = _exact_sum_kernel(data64, comp)
    return Expansion(tuple(comp[:m]))


def exact_dot(a: np.ndarray, b: np.ndarray) -> Expansion:
    """Exact sum of elementwise products.

    binary32 inputs: each product is exact in binary64, so the result is
    the exact dot product.  binary64 inputs: products are rounded once to
    binary64 and the rounded products are summed exactly (see module
    docstring).
    """
    if a.shape != b.shape:
        raise ValueError("exact_dot needs equal-length arrays")
    if a.dtype == np.float32 and b.dtype == np.float32:
        prods = a.astype(np.float64) * b.astype(np.float64)
    else:
        prods = np.asarray(a, np.float64) * np.asarray(b, np.float64)
    return exact_sum(prods)


def relative_error(approx: float, reference: Expansion) -> float:
    """(approx - reference) / reference using the two leading components.

    The evaluation error of this formula is O(eps^2) of the result, far
    below anything the experiments report.  Raises for a zero reference,
    where relative error is undefined.
    """
    if reference.is_zero:
        raise ValueError("relative error against a zero reference is undefined")
    hi = reference.hi
    lo = reference.lo
    return ((float(approx) - hi) - lo) / (hi + lo)
