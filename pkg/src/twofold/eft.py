"""Error-free transformations for floating-point addition.

A twofold result is a (value, error) pair of same-precision floats where
value is the correctly rounded sum and value + error recovers the exact
sum.  These two primitives are the building blocks for every summation
kernel in this package.

All code here must run under strict IEEE-754 round-to-nearest-even with
no reassociation and no FMA contraction.  CPython evaluates float
expressions exactly as written, and numpy scalar ops on float32 round
correctly, so both work as operand types.  The compiled kernels enforce
the same contract via a startup canary (see :mod:`twofold.kernels`).
"""

from __future__ import annotations

import math
from typing import NamedTuple


class Twofold(NamedTuple):
    """Value + error pair approximating one real number."""

    value: float
    error: float


def fast_two_sum(a, b) -> Twofold:
    """Dekker's 3-operation EFT.  Requires |a| >= |b| (or a == 0).

    Returns (x, y) with x = fl(a+b) and x + y == a + b exactly when the
    precondition holds.  The precondition is only asserted in debug runs
    (``python -O`` disables it); release callers are trusted, keeping the
    hot path branch-free.  Non-finite inputs propagate without trapping.
    """
    if __debug__:
        if math.isfinite(a) and math.isfinite(b):
            assert abs(a) >= abs(b) or a == 0, "fast_two_sum needs |a| >= |b|"
    x = a + b
    bv = x - a
    y = b - bv
    return Twofold(x, y)


def two_sum(a, b) -> Twofold:
    """Knuth's 6-operation EFT; no magnitude ordering required.

    Returns (x, y) with x = fl(a+b) and x + y == a + b exactly for any
    finite operands.  Non-finite inputs propagate without trapping.
    """
    x = a + b
    bv = x - a
    av = x - bv
    br = b - bv
    ar = a - av
    return Twofold(x, ar + br)


def rounding_canary() -> bool:
    """True iff the interpreter evaluates EFTs under strict rounding.

    fast_two_sum(1.0, 2**-53) must recover the round-off 2**-53; any
    value-unsafe (fast-math style) transformation cancels it to zero.
    """
    r = fast_two_sum(1.0, 2.0 ** -53)
    return r.value == 1.0 and r.error == 2.0 ** -53
