"""Summation and dot-product kernels: five methods, three execution flavors.

Methods
    direct            plain running sum
    wide              binary32 data accumulated in a binary64 variable
    twofold-fast      direct sum plus a Dekker-EFT round-off channel
    twofold-rigorous  direct sum plus a Knuth-EFT round-off channel
    kahan             compensated summation (correction folded into value)

Flavors
    sequential   the reference semantics: one accumulator, left to right
    unrolled(k)  k independent accumulator states striding the array
    vectorized(w) w lane-parallel states; implemented through the same
                 lane kernels (the compiler vectorizes the lane loop where
                 the target supports it), so it shares unrolled semantics

Every kernel is compiled with numba under strict IEEE semantics: no
fast-math, no reassociation, no FMA contraction.  Importing this module
runs a canary that aborts if the compiled code breaks the Dekker EFT
identity, since every error channel silently degrades to zero under
value-unsafe optimization.

The error field of a twofold result estimates (exact - value), so
value + error is the improved sum.  Dot products multiply first and track
only the summation round-off; the multiplication round-off is NOT
captured (a documented accuracy limitation).

Flop accounting follows the convention of counting one addition per data
element for every method and flavor, for both sums and dot products.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache

import numpy as np
from numba import njit

from .eft import Twofold


class Method(Enum):
    DIRECT = "direct"
    WIDE = "wide"
    TWOFOLD_FAST = "twofold-fast"
    TWOFOLD_RIGOROUS = "twofold-rigorous"
    KAHAN = "kahan"


_LANE_RANGE = (2, 16)
# One SIMD register's worth of lanes per precision.
_DEFAULT_LANES = {np.dtype(np.float32): 8, np.dtype(np.float64): 4}


@dataclass(frozen=True)
class Flavor:
    """Execution flavor; lanes == 0 means "default for the precision"."""

    kind: str  # "seq" | "unroll" | "vec"
    lanes: int = 0

    def __post_init__(self):
        if self.kind not in ("seq", "unroll", "vec"):
            raise ValueError(f"unknown flavor kind {self.kind!r}")
        if self.kind == "seq":
            if self.lanes:
                raise ValueError("sequential flavor takes no lane count")
        elif self.lanes:
            lo, hi = _LANE_RANGE
            if not (lo <= self.lanes <= hi) or self.lanes & (self.lanes - 1):
                raise ValueError(
                    f"lane count must be a power of two in [{lo}, {hi}]")

    @classmethod
    def sequential(cls) -> "Flavor":
        return cls("seq")

    @classmethod
    def unrolled(cls, k: int = 0) -> "Flavor":
        return cls("unroll", k)

    @classmethod
    def vectorized(cls, w: int = 0) -> "Flavor":
        return cls("vec", w)

    @classmethod
    def parse(cls, text: str) -> "Flavor":
        """Parse "seq", "unroll[:k]" or "vec[:w]" (CLI syntax)."""
        name, _, arg = text.partition(":")
        lanes = int(arg) if arg else 0
        if name == "seq":
            return cls.sequential()
        if name == "unroll":
            return cls.unrolled(lanes)
        if name == "vec":
            return cls.vectorized(lanes)
        raise ValueError(f"unknown flavor {text!r}; valid: seq, unroll:k, vec:w")

    def __str__(self) -> str:
        if self.kind == "seq":
            return "seq"
        return f"{self.kind}:{self.lanes}" if self.lanes else self.kind


@dataclass(frozen=True)
class SumResult:
    """Kernel output: twofold sum plus the attributed addition count."""

    twofold: Twofold
    adds_performed: int

    @property
    def value(self):
        return self.twofold.value

    @property
    def error(self):
        return self.twofold.error


# ---------------------------------------------------------------------------
# Sequential kernels.  Bodies are written exactly as the strict-rounding
# algebra requires; do not "simplify" any expression here.

@njit(cache=True)
def _direct_seq(data):
    s = np.zeros(1, data.dtype)[0]
    for i in range(data.shape[0]):
        s = s + data[i]
    return s


@njit(cache=True)
def _wide_seq(data):
    s = 0.0
    for i in range(data.shape[0]):
        s = s + np.float64(data[i])
    return s


@njit(cache=True)
def _tf_seq(data):
    z = np.zeros(1, data.dtype)
    s = z[0]
    e = z[0]
    for i in range(data.shape[0]):
        y = data[i]
        t = s + y
        c = (t - s) - y
        e = e - c
        s = t
    return s, e


@njit(cache=True)
def _tr_seq(data):
    z = np.zeros(1, data.dtype)
    s = z[0]
    e = z[0]
    for i in range(data.shape[0]):
        y = data[i]
        t = s + y
        yt = t - s
        dy = y - yt
        ds = s - (t - yt)
        e = e + (ds + dy)
        s = t
    return s, e


@njit(cache=True)
def _kahan_seq(data):
    z = np.zeros(1, data.dtype)
    s = z[0]
    c = z[0]
    for i in range(data.shape[0]):
        y = data[i] - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


@njit(cache=True)
def _direct_dot_seq(a, b):
    s = np.zeros(1, a.dtype)[0]
    for i in range(a.shape[0]):
        s = s + a[i] * b[i]
    return s


@njit(cache=True)
def _wide_dot_seq(a, b):
    s = 0.0
    for i in range(a.shape[0]):
        y = a[i] * b[i]  # product rounded in the data precision
        s = s + np.float64(y)
    return s


@njit(cache=True)
def _tf_dot_seq(a, b):
    z = np.zeros(1, a.dtype)
    s = z[0]
    e = z[0]
    for i in range(a.shape[0]):
        y = a[i] * b[i]
        t = s + y
        c = (t - s) - y
        e = e - c
        s = t
    return s, e


@njit(cache=True)
def _tr_dot_seq(a, b):
    z = np.zeros(1, a.dtype)
    s = z[0]
    e = z[0]
    for i in range(a.shape[0]):
        y = a[i] * b[i]
        t = s + y
        yt = t - s
        dy = y - yt
        ds = s - (t - yt)
        e = e + (ds + dy)
        s = t
    return s, e


@njit(cache=True)
def _kahan_dot_seq(a, b):
    z = np.zeros(1, a.dtype)
    s = z[0]
    c = z[0]
    for i in range(a.shape[0]):
        y = a[i] * b[i] - c
        t = s + y
        c = (t - s) - y
        s = t
    return s


# ---------------------------------------------------------------------------
# Lane kernels: k independent accumulator states, lane j taking elements
# i*k + j, combined after the blocked region; the tail continues on the
# merged state.  Twofold lanes merge values with two_sum, folding the
# merge round-offs into the error channel, which preserves exact tracking
# across the reduction tree.
#
# k is baked in as a compile-time constant (one specialization per lane
# count, built lazily): with a literal trip count LLVM unrolls and
# vectorizes the lane loop, which is the whole point of this flavor.

@lru_cache(maxsize=None)
def _direct_lanes(k):
    @njit(cache=True)
    def kern(data):
        acc = np.zeros(k, data.dtype)
        n = data.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                acc[j] = acc[j] + data[i + j]
        s = np.zeros(1, data.dtype)[0]
        for j in range(k):
            s = s + acc[j]
        for i in range(nb, n):
            s = s + data[i]
        return s
    return kern


@lru_cache(maxsize=None)
def _wide_lanes(k):
    @njit(cache=True)
    def kern(data):
        acc = np.zeros(k, np.float64)
        n = data.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                acc[j] = acc[j] + np.float64(data[i + j])
        s = 0.0
        for j in range(k):
            s = s + acc[j]
        for i in range(nb, n):
            s = s + np.float64(data[i])
        return s
    return kern


@lru_cache(maxsize=None)
def _tf_lanes(k):
    @njit(cache=True)
    def kern(data):
        va = np.zeros(k, data.dtype)
        ea = np.zeros(k, data.dtype)
        n = data.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = data[i + j]
                t = va[j] + y
                c = (t - va[j]) - y
                ea[j] = ea[j] - c
                va[j] = t
        s = va[0]
        e = ea[0]
        for j in range(1, k):
            x = s + va[j]
            bv = x - s
            sv = x - bv
            e = e + ((s - sv) + (va[j] - bv)) + ea[j]
            s = x
        for i in range(nb, n):
            y = data[i]
            t = s + y
            c = (t - s) - y
            e = e - c
            s = t
        return s, e
    return kern


@lru_cache(maxsize=None)
def _tr_lanes(k):
    @njit(cache=True)
    def kern(data):
        va = np.zeros(k, data.dtype)
        ea = np.zeros(k, data.dtype)
        n = data.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = data[i + j]
                t = va[j] + y
                yt = t - va[j]
                dy = y - yt
                ds = va[j] - (t - yt)
                ea[j] = ea[j] + (ds + dy)
                va[j] = t
        s = va[0]
        e = ea[0]
        for j in range(1, k):
            x = s + va[j]
            bv = x - s
            sv = x - bv
            e = e + ((s - sv) + (va[j] - bv)) + ea[j]
            s = x
        for i in range(nb, n):
            y = data[i]
            t = s + y
            yt = t - s
            dy = y - yt
            ds = s - (t - yt)
            e = e + (ds + dy)
            s = t
        return s, e
    return kern


@lru_cache(maxsize=None)
def _kahan_lanes(k):
    @njit(cache=True)
    def kern(data):
        sa = np.zeros(k, data.dtype)
        ca = np.zeros(k, data.dtype)
        n = data.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = data[i + j] - ca[j]
                t = sa[j] + y
                ca[j] = (t - sa[j]) - y
                sa[j] = t
        s = sa[0]
        c = ca[0]
        for j in range(1, k):
            # feed the lane sum and its pending correction through the loop
            y = sa[j] - c
            t = s + y
            c = (t - s) - y
            s = t
            y = (-ca[j]) - c
            t = s + y
            c = (t - s) - y
            s = t
        for i in range(nb, n):
            y = data[i] - c
            t = s + y
            c = (t - s) - y
            s = t
        return s
    return kern


@lru_cache(maxsize=None)
def _direct_dot_lanes(k):
    @njit(cache=True)
    def kern(a, b):
        acc = np.zeros(k, a.dtype)
        n = a.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                acc[j] = acc[j] + a[i + j] * b[i + j]
        s = np.zeros(1, a.dtype)[0]
        for j in range(k):
            s = s + acc[j]
        for i in range(nb, n):
            s = s + a[i] * b[i]
        return s
    return kern


@lru_cache(maxsize=None)
def _wide_dot_lanes(k):
    @njit(cache=True)
    def kern(a, b):
        acc = np.zeros(k, np.float64)
        n = a.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = a[i + j] * b[i + j]
                acc[j] = acc[j] + np.float64(y)
        s = 0.0
        for j in range(k):
            s = s + acc[j]
        for i in range(nb, n):
            y = a[i] * b[i]
            s = s + np.float64(y)
        return s
    return kern


@lru_cache(maxsize=None)
def _tf_dot_lanes(k):
    @njit(cache=True)
    def kern(a, b):
        va = np.zeros(k, a.dtype)
        ea = np.zeros(k, a.dtype)
        n = a.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = a[i + j] * b[i + j]
                t = va[j] + y
                c = (t - va[j]) - y
                ea[j] = ea[j] - c
                va[j] = t
        s = va[0]
        e = ea[0]
        for j in range(1, k):
            x = s + va[j]
            bv = x - s
            sv = x - bv
            e = e + ((s - sv) + (va[j] - bv)) + ea[j]
            s = x
        for i in range(nb, n):
            y = a[i] * b[i]
            t = s + y
            c = (t - s) - y
            e = e - c
            s = t
        return s, e
    return kern


@lru_cache(maxsize=None)
def _tr_dot_lanes(k):
    @njit(cache=True)
    def kern(a, b):
        va = np.zeros(k, a.dtype)
        ea = np.zeros(k, a.dtype)
        n = a.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = a[i + j] * b[i + j]
                t = va[j] + y
                yt = t - va[j]
                dy = y - yt
                ds = va[j] - (t - yt)
                ea[j] = ea[j] + (ds + dy)
                va[j] = t
        s = va[0]
        e = ea[0]
        for j in range(1, k):
            x = s + va[j]
            bv = x - s
            sv = x - bv
            e = e + ((s - sv) + (va[j] - bv)) + ea[j]
            s = x
        for i in range(nb, n):
            y = a[i] * b[i]
            t = s + y
            yt = t - s
            dy = y - yt
            ds = s - (t - yt)
            e = e + (ds + dy)
            s = t
        return s, e
    return kern


@lru_cache(maxsize=None)
def _kahan_dot_lanes(k):
    @njit(cache=True)
    def kern(a, b):
        sa = np.zeros(k, a.dtype)
        ca = np.zeros(k, a.dtype)
        n = a.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                y = a[i + j] * b[i + j] - ca[j]
                t = sa[j] + y
                ca[j] = (t - sa[j]) - y
                sa[j] = t
        s = sa[0]
        c = ca[0]
        for j in range(1, k):
            y = sa[j] - c
            t = s + y
            c = (t - s) - y
            s = t
            y = (-ca[j]) - c
            t = s + y
            c = (t - s) - y
            s = t
        for i in range(nb, n):
            y = a[i] * b[i] - c
            t = s + y
            c = (t - s) - y
            s = t
        return s
    return kern


# ---------------------------------------------------------------------------
# Strict-rounding canary.  Runs at import: a build whose compiled code
# reassociates or contracts these expressions cancels the round-off term,
# and every error channel in this module would silently read zero.

@njit(cache=True)
def _canary_kernel(a, b):
    # runtime arguments keep the expressions out of constant folding, so a
    # value-unsafe build is actually exercised
    x = a + b
    bv = x - a
    y = b - bv
    return x, y


def _check_strict_rounding():
    x, y = _canary_kernel(1.0, 2.0 ** -53)
    if x != 1.0 or y != 2.0 ** -53:
        raise RuntimeError(
            "compiled kernels violate strict IEEE rounding "
            f"(canary returned ({x!r}, {y!r}), expected (1.0, 2**-53)); "
            "a fast-math style build is unusable for error tracking")


_check_strict_rounding()


# ---------------------------------------------------------------------------
# Dispatch.

def _check_input(data, b):
    data = np.ascontiguousarray(data)
    if data.dtype not in (np.float32, np.float64):
        raise TypeError(f"unsupported dtype {data.dtype}; use float32/float64")
    if b is not None:
        b = np.ascontiguousarray(b)
        if b.dtype != data.dtype:
            raise TypeError("dot operands must share a dtype")
        if b.shape != data.shape:
            raise ValueError("dot operands must have equal length")
    return data, b


def _zero(dtype):
    return dtype.type(0)


def run_flavor(method: Method, flavor: Flavor, data, b=None) -> SumResult:
    """Run one method in one flavor over data (dot product when b is given).

    Non-sequential flavors associate differently and are not bitwise
    reproductions of sequential results; they satisfy the same accuracy
    contracts.  adds_performed is always len(data) by convention.
    """
    data, b = _check_input(data, b)
    n = data.shape[0]
    if method is Method.WIDE and data.dtype != np.float32:
        raise TypeError("wide accumulation is defined for float32 data only")

    if flavor.kind == "seq":
        k = 0
    else:
        # vectorized falls back to the lane kernels (see module docstring)
        k = flavor.lanes or _DEFAULT_LANES[data.dtype]

    t = data.dtype.type  # numba widens float32 returns; cast back is lossless
    if method is Method.DIRECT:
        if k:
            v = _direct_lanes(k)(data) if b is None else _direct_dot_lanes(k)(data, b)
        else:
            v = _direct_seq(data) if b is None else _direct_dot_seq(data, b)
        return SumResult(Twofold(t(v), t(0)), n)
    if method is Method.WIDE:
        if k:
            v = _wide_lanes(k)(data) if b is None else _wide_dot_lanes(k)(data, b)
        else:
            v = _wide_seq(data) if b is None else _wide_dot_seq(data, b)
        return SumResult(Twofold(np.float64(v), np.float64(0)), n)
    if method is Method.KAHAN:
        if k:
            v = _kahan_lanes(k)(data) if b is None else _kahan_dot_lanes(k)(data, b)
        else:
            v = _kahan_seq(data) if b is None else _kahan_dot_seq(data, b)
        return SumResult(Twofold(t(v), t(0)), n)
    if method is Method.TWOFOLD_FAST:
        if k:
            v, e = _tf_lanes(k)(data) if b is None else _tf_dot_lanes(k)(data, b)
        else:
            v, e = _tf_seq(data) if b is None else _tf_dot_seq(data, b)
        return SumResult(Twofold(t(v), t(e)), n)
    if method is Method.TWOFOLD_RIGOROUS:
        if k:
            v, e = _tr_lanes(k)(data) if b is None else _tr_dot_lanes(k)(data, b)
        else:
            v, e = _tr_seq(data) if b is None else _tr_dot_seq(data, b)
        return SumResult(Twofold(t(v), t(e)), n)
    raise ValueError(f"unknown method {method!r}")


_SEQ_SUM = {Method.DIRECT: _direct_seq, Method.WIDE: _wide_seq,
            Method.KAHAN: _kahan_seq, Method.TWOFOLD_FAST: _tf_seq,
            Method.TWOFOLD_RIGOROUS: _tr_seq}
_LANE_SUM = {Method.DIRECT: _direct_lanes, Method.WIDE: _wide_lanes,
             Method.KAHAN: _kahan_lanes, Method.TWOFOLD_FAST: _tf_lanes,
             Method.TWOFOLD_RIGOROUS: _tr_lanes}


def raw_sum_kernel(method: Method, flavor: Flavor, dtype):
    """The compiled sum kernel itself, plus whether it returns a pair.

    Timing harnesses call this to drive a kernel from inside other
    compiled code, skipping the per-call dispatch that run_flavor does;
    results are bitwise identical to run_flavor on the same data.
    """
    if flavor.kind == "seq":
        return _SEQ_SUM[method], method in _TWOFOLD_METHODS
    k = flavor.lanes or _DEFAULT_LANES[np.dtype(dtype)]
    return _LANE_SUM[method](k), method in _TWOFOLD_METHODS


_TWOFOLD_METHODS = (Method.TWOFOLD_FAST, Method.TWOFOLD_RIGOROUS)

_SEQ = Flavor.sequential()


def sum_direct(data) -> SumResult:
    return run_flavor(Method.DIRECT, _SEQ, data)


def sum_wide(data) -> SumResult:
    return run_flavor(Method.WIDE, _SEQ, data)


def sum_twofold_fast(data) -> SumResult:
    return run_flavor(Method.TWOFOLD_FAST, _SEQ, data)


def sum_twofold_rigorous(data) -> SumResult:
    return run_flavor(Method.TWOFOLD_RIGOROUS, _SEQ, data)


def sum_kahan(data) -> SumResult:
    return run_flavor(Method.KAHAN, _SEQ, data)


def dot_direct(a, b) -> SumResult:
    return run_flavor(Method.DIRECT, _SEQ, a, b)


def dot_wide(a, b) -> SumResult:
    return run_flavor(Method.WIDE, _SEQ, a, b)


def dot_twofold_fast(a, b) -> SumResult:
    return run_flavor(Method.TWOFOLD_FAST, _SEQ, a, b)


def dot_twofold_rigorous(a, b) -> SumResult:
    return run_flavor(Method.TWOFOLD_RIGOROUS, _SEQ, a, b)


def dot_kahan(a, b) -> SumResult:
    return run_flavor(Method.KAHAN, _SEQ, a, b)
