import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twofold import Twofold, fast_two_sum, rounding_canary, two_sum

EPS64 = 2.0 ** -53


def test_fast_two_sum_exact_pair():
    assert fast_two_sum(1.0, 1.0) == Twofold(2.0, 0.0)


def test_fast_two_sum_absorbed_addend():
    # 1 + 2**-53 rounds to 1.0 under ties-to-even; the round-off survives
    # in the error slot.
    assert fast_two_sum(1.0, EPS64) == Twofold(1.0, EPS64)


def test_fast_two_sum_tie_rounds_to_even():
    # 2**53 + 1 is a tie; rounds to the even significand 2**53.
    assert fast_two_sum(2.0 ** 53, 1.0) == Twofold(2.0 ** 53, 1.0)


def test_two_sum_zero_identity():
    for x in (0.5, -3.25, 1e300, 5e-324):
        assert two_sum(0.0, x) == Twofold(x, 0.0)


def test_two_sum_order_independent():
    # The small operand first violates Dekker's precondition; Knuth's form
    # still recovers the round-off.
    assert two_sum(EPS64, 1.0) == Twofold(1.0, EPS64)


finite64 = st.floats(allow_nan=False, allow_infinity=False,
                     min_value=-1e300, max_value=1e300)


@given(finite64, finite64)
@settings(max_examples=500)
def test_two_sum_exact_binary64(a, b):
    x, y = two_sum(a, b)
    assert x == a + b
    assert Fraction(x) + Fraction(y) == Fraction(a) + Fraction(b)


@given(finite64, finite64)
@settings(max_examples=500)
def test_fast_two_sum_agrees_when_ordered(a, b):
    hi, lo = (a, b) if abs(a) >= abs(b) else (b, a)
    f = fast_two_sum(hi, lo)
    k = two_sum(hi, lo)
    assert f == k


@given(st.floats(width=32, allow_nan=False, allow_infinity=False),
       st.floats(width=32, allow_nan=False, allow_infinity=False))
@settings(max_examples=500)
def test_two_sum_exact_binary32_widening(a, b):
    a = np.float32(a)
    b = np.float32(b)
    with np.errstate(over="ignore", invalid="ignore"):
        x, y = two_sum(a, b)
    if math.isfinite(float(x)):
        # non-overlapping binary32 parts fit a binary64 exactly
        assert np.float64(x) + np.float64(y) == np.float64(a) + np.float64(b)


@given(finite64, finite64)
@settings(max_examples=300)
def test_error_within_one_ulp_of_value(a, b):
    x, y = two_sum(a, b)
    if x != 0:
        assert abs(y) <= math.ulp(x)


def test_seeded_binary32_bulk_exactness():
    rng = np.random.default_rng(7)
    e = rng.integers(-20, 20, 20_000)
    a = (rng.uniform(-1, 1, 20_000) * 2.0 ** e).astype(np.float32)
    b = (rng.uniform(-1, 1, 20_000) * 2.0 ** rng.permutation(e)).astype(np.float32)
    for ai, bi in zip(a, b):
        x, y = two_sum(ai, bi)
        assert np.float64(x) + np.float64(y) == np.float64(ai) + np.float64(bi)


def test_subnormal_inputs_stay_exact():
    tiny = 5e-324
    for a, b in [(tiny, tiny), (2e-308, -tiny), (1e-310, 3e-312)]:
        x, y = two_sum(a, b)
        assert Fraction(x) + Fraction(y) == Fraction(a) + Fraction(b)


def test_nonfinite_propagates_without_trapping():
    x, y = two_sum(math.inf, 1.0)
    assert math.isinf(x)
    x, _ = two_sum(1e308, 1e308)  # overflow -> non-finite value field
    assert not math.isfinite(x)


def test_rounding_canary():
    assert rounding_canary()
