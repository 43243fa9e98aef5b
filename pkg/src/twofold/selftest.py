"""Runtime environment self-test: strict rounding and EFT exactness.

Run via the CLI ``selftest`` subcommand.  A failure means the build or
interpreter applies value-unsafe float transformations and every error
channel in this package is untrustworthy.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from . import lcg
from .eft import fast_two_sum, two_sum, rounding_canary


def run_selftest(pairs32: int = 10_000, pairs64: int = 2_000) -> list[str]:
    """Returns a list of failure descriptions; empty means healthy."""
    failures = []

    if not rounding_canary():
        failures.append("interpreter canary: fast_two_sum(1.0, 2**-53) did not "
                        "recover the round-off (value-unsafe float math)")
    try:
        from .kernels import _check_strict_rounding
        _check_strict_rounding()
    except RuntimeError as exc:
        failures.append(f"compiled canary: {exc}")

    # Exactness spot-check on random f32 pairs (widening to f64 is exact).
    g = np.random.default_rng(12345)
    a32 = (g.uniform(-1, 1, pairs32) * 2.0 ** g.integers(-20, 20, pairs32)
           ).astype(np.float32)
    b32 = (g.uniform(-1, 1, pairs32) * 2.0 ** g.integers(-20, 20, pairs32)
           ).astype(np.float32)
    for a, b in zip(a32, b32):
        x, y = two_sum(a, b)
        if np.float64(x) + np.float64(y) != np.float64(a) + np.float64(b):
            failures.append(f"two_sum inexact for f32 pair ({a!r}, {b!r})")
            break
        hi, lo = (a, b) if abs(a) >= abs(b) else (b, a)
        xf, yf = fast_two_sum(hi, lo)
        if (xf, yf) != two_sum(hi, lo):
            failures.append(f"fast_two_sum disagrees with two_sum on ({hi!r}, {lo!r})")
            break

    # f64 pairs against exact rational arithmetic.
    a64 = g.uniform(-1, 1, pairs64) * 2.0 ** g.integers(-300, 300, pairs64)
    b64 = g.uniform(-1, 1, pairs64) * 2.0 ** g.integers(-300, 300, pairs64)
    for a, b in zip(a64, b64):
        x, y = two_sum(a, b)
        if Fraction(x) + Fraction(y) != Fraction(a) + Fraction(b):
            failures.append(f"two_sum inexact for f64 pair ({a!r}, {b!r})")
            break

    # Generator constants.
    nr = lcg.next_raw(lcg.LcgState(lcg.LcgKind.NUMERICAL_RECIPES, 0))[0]
    mx = lcg.next_raw(lcg.LcgState(lcg.LcgKind.MMIX, 0))[0]
    if nr != 1013904223 or mx != 1442695040888963407:
        failures.append("LCG recurrence constants are wrong")

    return failures
