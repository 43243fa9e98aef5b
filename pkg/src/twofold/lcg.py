"""Deterministic test-data generation with linear congruential generators.

Two classic LCGs are provided: the 32-bit Numerical Recipes generator and
Knuth's 64-bit MMIX generator.  Both are wretched statistically but fully
reproducible across platforms, which is what the accuracy experiments
need.  Array filling is compiled with numba so million-element test sets
cost milliseconds; the scalar API and the compiled fill produce bitwise
identical streams (tested).
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numba import njit


class LcgKind(Enum):
    NUMERICAL_RECIPES = "nr"
    MMIX = "mmix"


# kind -> (state width in bits, multiplier, increment)
_PARAMS = {
    LcgKind.NUMERICAL_RECIPES: (32, 1664525, 1013904223),
    LcgKind.MMIX: (64, 6364136223846793005, 1442695040888963407),
}

DEFAULT_SEED = 1


@dataclass(frozen=True)
class LcgState:
    """Immutable generator state; advancing returns a new state."""

    kind: LcgKind
    state: int = DEFAULT_SEED


def next_raw(g: LcgState) -> tuple[int, LcgState]:
    """Advance one step: s' = (a*s + c) mod 2**width.  Returns (s', new state)."""
    width, a, c = _PARAMS[g.kind]
    s = (a * g.state + c) % (1 << width)
    return s, LcgState(g.kind, s)


def raw_to_uniform(raw: int, kind: LcgKind, dtype=np.float64, sym: bool = False):
    """Map a raw LCG output to [0,1) (or [-1,1) when sym) in the target precision.

    The unit value is raw / 2**width rounded once to the target precision;
    the symmetric value is 2*u - 1 computed in the target precision.
    """
    width = _PARAMS[kind][0]
    t = np.dtype(dtype).type
    u = t(raw) / t(2.0 ** width)
    if sym:
        u = t(2) * u - t(1)
    return u


def uniform01(g: LcgState, dtype=np.float64):
    """Draw one value in [0,1); returns (value, new state)."""
    raw, g2 = next_raw(g)
    return raw_to_uniform(raw, g.kind, dtype), g2


def uniform_sym(g: LcgState, dtype=np.float64):
    """Draw one value in [-1,1); returns (value, new state)."""
    raw, g2 = next_raw(g)
    return raw_to_uniform(raw, g.kind, dtype, sym=True), g2


@njit(cache=True)
def _fill_nr(out, seed, sym):
    s = np.uint64(seed) & np.uint64(0xFFFFFFFF)
    a = np.uint64(1664525)
    c = np.uint64(1013904223)
    mask = np.uint64(0xFFFFFFFF)
    one = out.dtype.type(1)
    two = out.dtype.type(2)
    scale = out.dtype.type(2.0 ** 32)
    for i in range(out.shape[0]):
        s = (a * s + c) & mask
        v = out.dtype.type(s) / scale
        if sym:
            v = two * v - one
        out[i] = v


@njit(cache=True)
def _fill_mmix(out, seed, sym):
    s = np.uint64(seed)
    a = np.uint64(6364136223846793005)
    c = np.uint64(1442695040888963407)
    one = out.dtype.type(1)
    two = out.dtype.type(2)
    scale = out.dtype.type(2.0 ** 64)
    for i in range(out.shape[0]):
        s = a * s + c  # uint64 arithmetic wraps mod 2**64
        v = out.dtype.type(s) / scale
        if sym:
            v = two * v - one
        out[i] = v


def fill(kind: LcgKind, n: int, seed: int = DEFAULT_SEED, dtype=np.float64,
         sym: bool = False) -> np.ndarray:
    """Fill an n-element array from the given generator and seed."""
    out = np.empty(n, dtype)
    if kind is LcgKind.NUMERICAL_RECIPES:
        _fill_nr(out, seed, sym)
    else:
        _fill_mmix(out, seed, sym)
    return out
