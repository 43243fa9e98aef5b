import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from twofold import Expansion, exact_dot, exact_sum, expansion_add, relative_error
from twofold.expansion import ZERO

from _rational import rational_sum

EPS64 = 2.0 ** -53


def test_add_to_zero():
    assert expansion_add(ZERO, 1.5).components == (1.5,)


def test_add_keeps_roundoff():
    e = expansion_add(ZERO, 1.0)
    e = expansion_add(e, EPS64)
    assert e.components == (EPS64, 1.0)


def test_add_merges_small_parts():
    # the two small parts join to 2**-52, and 1 + 2**-52 is representable,
    # so the cascade compresses to a single component of the same real
    e = Expansion((EPS64, 1.0))
    e = expansion_add(e, EPS64)
    assert rational_sum(e.components) == Fraction(1) + 2 * Fraction(EPS64)
    assert e.components == (1.0 + 2 * EPS64,)


def test_exact_sum_empty_is_zero_expansion():
    e = exact_sum(np.array([], np.float64))
    assert e.is_zero
    assert float(e) == 0.0


def test_exact_sum_small_trace():
    e = exact_sum(np.array([1.0, EPS64, EPS64]))
    assert rational_sum(e.components) == Fraction(1) + 2 * Fraction(EPS64)
    assert float(e) == 1.0 + 2 * EPS64


def test_exact_sum_hours_reference():
    # float32 0.1 is exactly 13421773 * 2**-27; 3.6e6 copies sum to
    # 48318382800000 / 2**27 seconds = 100.00000149011612 hours exactly
    # (which is why a binary64 counter deviates from 100 h by ~1.49e-6).
    data = np.full(3_600_000, np.float32(0.1), np.float32)
    e = exact_sum(data)
    assert rational_sum(e.components) == Fraction(13421773 * 3_600_000, 2 ** 27)
    assert e.hi / 3600 == pytest.approx(100.00000149011612, abs=1e-10)


def _bit_range(x):
    """(lsb, msb) bit positions of a nonzero float's significand."""
    f = Fraction(abs(x))
    n, d = f.numerator, f.denominator  # d is a power of two
    shift = d.bit_length() - 1
    lsb = (n & -n).bit_length() - 1 - shift
    msb = n.bit_length() - 1 - shift
    return lsb, msb


def _assert_nonoverlapping(e):
    comps = e.components
    assert all(c != 0.0 for c in comps)
    for small, big in zip(comps, comps[1:]):
        assert abs(small) < abs(big)
        # non-overlap: every bit of the smaller sits below the lowest bit
        # of the larger
        assert _bit_range(small)[1] < _bit_range(big)[0]


@given(st.lists(st.floats(min_value=-1e15, max_value=1e15,
                          allow_nan=False, allow_infinity=False), max_size=60))
@settings(max_examples=200, deadline=None)
def test_exact_sum_matches_rational_oracle(values):
    data = np.array(values, np.float64)
    e = exact_sum(data)
    assert rational_sum(e.components) == rational_sum(data)
    _assert_nonoverlapping(e)


@given(st.lists(st.floats(min_value=-1e6, max_value=1e6,
                          allow_nan=False, allow_infinity=False),
                min_size=1, max_size=30),
       st.randoms())
@settings(max_examples=150, deadline=None)
def test_permutation_invariance(values, rnd):
    data = np.array(values, np.float64)
    shuffled = list(values)
    rnd.shuffle(shuffled)
    a = exact_sum(data)
    b = exact_sum(np.array(shuffled, np.float64))
    assert rational_sum(a.components) == rational_sum(b.components)


def test_small_integer_sums_are_exact():
    for n in range(1, 11):
        data = np.arange(1, n + 1, dtype=np.float64)
        e = exact_sum(data)
        assert float(e) == n * (n + 1) / 2
        assert len(e.components) == 1


def test_random_instances_against_rational_oracle():
    rng = np.random.default_rng(3)
    for _ in range(1000):
        n = int(rng.integers(1, 80))
        data = (rng.uniform(-1, 1, n) * 10.0 ** rng.integers(-12, 12, n))
        e = exact_sum(data)
        assert rational_sum(e.components) == rational_sum(data)


def test_exact_dot_binary32_products_are_exact():
    rng = np.random.default_rng(5)
    a = rng.uniform(0, 1, 500).astype(np.float32)
    b = rng.uniform(0, 1, 500).astype(np.float32)
    e = exact_dot(a, b)
    ref = sum(Fraction(float(x)) * Fraction(float(y)) for x, y in zip(a, b))
    assert rational_sum(e.components) == ref


def test_exact_dot_binary64_sums_rounded_products():
    a = np.array([1.0 + 2.0 ** -30, 3.0])
    b = np.array([1.0 + 2.0 ** -30, 7.0])
    e = exact_dot(a, b)
    ref = rational_sum([float((1.0 + 2.0 ** -30) * (1.0 + 2.0 ** -30)), 21.0])
    assert rational_sum(e.components) == ref


def test_exact_dot_length_mismatch():
    with pytest.raises(ValueError):
        exact_dot(np.ones(3, np.float32), np.ones(4, np.float32))


def test_relative_error_of_rounded_reference_is_negligible():
    # a single-component reference scores its own value as exactly 0;
    # with a trailing component the formula reports the true sub-epsilon
    # residual of the rounding itself
    single = exact_sum(np.array([1.5]))
    assert relative_error(float(single), single) == 0.0
    e = exact_sum(np.array([1.0, EPS64]))
    assert abs(relative_error(float(e), e)) <= EPS64


def test_relative_error_sign_and_magnitude():
    # approx below the reference gives a negative relative error
    data = np.full(3_600_000, np.float32(0.1), np.float32)
    ref = exact_sum(data)
    approx = 96.3958 * 3600.0
    rel = relative_error(approx, ref)
    assert rel == pytest.approx(-3.604 / 100.0, abs=2e-4)


def test_relative_error_zero_reference_is_undefined():
    with pytest.raises(ValueError):
        relative_error(1.0, ZERO)
