"""Throughput measurement: method x flavor x precision x memory-tier grid.

Methodology
    - best-of-R timing on a monotonic clock, with warmup runs;
    - per-sample inner repetition auto-scaled until each measurement
      takes at least 10 ms, so timer granularity is irrelevant;
    - one addition is attributed per data element for every method and
      flavor (sums and dot products alike), so megaflops == elements/s;
    - every timed result feeds a checksum that is carried into the
      report, preventing dead-code elimination of the measured kernel;
    - single-threaded, pinned to one core where the platform allows.

Tier sizes are configuration, not detected topology: defaults put the
working set in L1 (small), last-level cache (medium), and main memory
(large).  Absolute rates are hardware-specific; only ratios and orderings
are meaningful, and report-level ordering checks are flagged rather than
failed (shared machines are noisy).
"""

from __future__ import annotations

import io
import os
import platform
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from enum import Enum
from functools import lru_cache

import numpy as np
from numba import njit

from . import lcg
from .kernels import Method, Flavor, raw_sum_kernel, run_flavor, _direct_lanes

_MIN_SAMPLE_SECONDS = 0.010


class Tier(Enum):
    SMALL = "small"
    MEDIUM = "medium"
    LARGE = "large"
    NOREAD = "noread"  # synthetic: register/L1-resident compute roof


@dataclass(frozen=True)
class TierSizes:
    """Working-set bytes per tier (per array; dot products stream two)."""

    small: int = 16 * 1024
    medium: int = 1024 * 1024
    large: int = 64 * 1024 * 1024

    def bytes_for(self, tier: Tier) -> int:
        return getattr(self, tier.value)


@dataclass(frozen=True)
class KernelReport:
    method: str
    flavor: str
    precision: str
    tier: str
    n: int
    repetitions: int
    best_elements_per_second: float
    megaflops: float
    checksum: float
    timestamp: str
    environment: str


_DTYPES = {"f32": np.float32, "f64": np.float64}

# Canonical report row order.
_METHOD_ORDER = [Method.DIRECT, Method.TWOFOLD_FAST, Method.TWOFOLD_RIGOROUS,
                 Method.KAHAN, Method.WIDE]
_FLAVOR_ORDER = {"seq": 0, "unroll": 1, "vec": 2}


def pin_to_one_core() -> bool:
    """Pin this process to a single core; True on success."""
    try:
        cpus = sorted(os.sched_getaffinity(0))
        os.sched_setaffinity(0, {cpus[0]})
        return True
    except (AttributeError, OSError):
        return False


def environment_descriptor(sizes: TierSizes, pinned: bool) -> str:
    clk = time.get_clock_info("perf_counter")
    return (f"platform={platform.platform()} python={platform.python_version()} "
            f"clock=perf_counter(res={clk.resolution!r},monotonic={clk.monotonic}) "
            f"tiers=({sizes.small},{sizes.medium},{sizes.large})B "
            f"pinned={'yes' if pinned else 'no'}")


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _time_best_of(fn, repetitions: int, warmup: int):
    """Best wall time of `fn` over R samples, auto-scaling inner repeats.

    Returns (best seconds per single fn invocation, inner repeat count,
    accumulated checksum).
    """
    checksum = 0.0
    inner = 1
    while True:
        t0 = time.perf_counter()
        for _ in range(inner):
            checksum += fn()
        dt = time.perf_counter() - t0
        if dt >= _MIN_SAMPLE_SECONDS:
            break
        inner *= 2
    for _ in range(warmup):
        for _ in range(inner):
            checksum += fn()
    best = float("inf")
    for _ in range(repetitions):
        t0 = time.perf_counter()
        for _ in range(inner):
            checksum += fn()
        dt = time.perf_counter() - t0
        best = min(best, dt / inner)
    return best, inner, checksum


def _time_best_of_batched(run, repetitions: int, warmup: int):
    """Like _time_best_of, but `run(r)` performs r iterations itself
    (inside compiled code) and returns a checksum contribution."""
    checksum = run(1)  # compile before anything is timed
    inner = 1
    while True:
        t0 = time.perf_counter()
        checksum += run(inner)
        dt = time.perf_counter() - t0
        if dt >= _MIN_SAMPLE_SECONDS:
            break
        inner *= 2
    for _ in range(warmup):
        checksum += run(inner)
    best = float("inf")
    for _ in range(repetitions):
        t0 = time.perf_counter()
        checksum += run(inner)
        dt = time.perf_counter() - t0
        best = min(best, dt / inner)
    return best, inner, checksum


@lru_cache(maxsize=None)
def _repeat_scalar(kern):
    @njit
    def rep(data, reps):
        s = 0.0
        for _ in range(reps):
            s += np.float64(kern(data))
        return s
    return rep


@lru_cache(maxsize=None)
def _repeat_pair(kern):
    @njit
    def rep(data, reps):
        s = 0.0
        for _ in range(reps):
            v, e = kern(data)
            s += np.float64(v) + np.float64(e)
        return s
    return rep


def _consume(res) -> float:
    return float(res.value) + float(res.error)


def _measure(method, flavor, precision, tier_name, data, b, repetitions,
             warmup, env) -> KernelReport:
    n = data.shape[0]

    def once():
        return _consume(run_flavor(method, flavor, data, b))

    best, _, checksum = _time_best_of(once, repetitions, warmup)
    eps = n / best
    return KernelReport(method.value, str(flavor), precision, tier_name, n,
                        repetitions, eps, eps / 1e6, checksum, _now(), env)


def run_bench(methods=tuple(_METHOD_ORDER), flavors=(Flavor.sequential(),),
              precisions=("f32", "f64"), tiers=(Tier.SMALL, Tier.MEDIUM, Tier.LARGE),
              dot: bool = False, repetitions: int = 20, warmup: int = 3,
              sizes: TierSizes = TierSizes(), seed: int = lcg.DEFAULT_SEED,
              ) -> list[KernelReport]:
    """Measure the selected grid; returns reports in canonical row order."""
    if repetitions <= 0:
        return []
    pinned = pin_to_one_core()
    env = environment_descriptor(sizes, pinned)
    reports = []
    for precision in precisions:
        dtype = _DTYPES[precision]
        for tier in tiers:
            n = sizes.bytes_for(tier) // np.dtype(dtype).itemsize
            data = lcg.fill(lcg.LcgKind.NUMERICAL_RECIPES, n, seed, dtype)
            b = lcg.fill(lcg.LcgKind.MMIX, n, seed, dtype) if dot else None
            for method in methods:
                if method is Method.WIDE and precision != "f32":
                    continue
                for flavor in flavors:
                    reports.append(_measure(method, flavor, precision,
                                            tier.value, data, b,
                                            repetitions, warmup, env))
    reports.sort(key=_row_key)
    return reports


def _row_key(r: KernelReport):
    mi = [m.value for m in _METHOD_ORDER].index(r.method)
    fk = r.flavor.split(":")[0]
    ti = [t.value for t in Tier].index(r.tier)
    return (r.precision, _FLAVOR_ORDER.get(fk, 9), mi, ti)


@lru_cache(maxsize=None)
def _read2_lanes(k):
    @njit(cache=True)
    def kern(a, b):
        acc = np.zeros(k, a.dtype)
        n = a.shape[0]
        nb = n - n % k
        for i in range(0, nb, k):
            for j in range(k):
                acc[j] = acc[j] + (a[i + j] + b[i + j])
        s = np.zeros(1, a.dtype)[0]
        for j in range(k):
            s = s + acc[j]
        for i in range(nb, n):
            s = s + (a[i] + b[i])
        return s
    return kern


def run_read_baseline(channels: int, tier: Tier, precision: str = "f32",
                      repetitions: int = 20, warmup: int = 3,
                      sizes: TierSizes = TierSizes(),
                      seed: int = lcg.DEFAULT_SEED) -> KernelReport:
    """Streaming-read roof: consume 1 or 2 arrays with a trivial reduction.

    One channel models summation traffic, two channels model dot-product
    traffic.  Elements/s counts reduction items (pairs for two channels).
    """
    if channels not in (1, 2):
        raise ValueError("channels must be 1 or 2")
    if repetitions <= 0:
        raise ValueError("repetitions must be positive")
    pinned = pin_to_one_core()
    env = environment_descriptor(sizes, pinned)
    dtype = _DTYPES[precision]
    n = sizes.bytes_for(tier) // np.dtype(dtype).itemsize
    a = lcg.fill(lcg.LcgKind.NUMERICAL_RECIPES, n, seed, dtype)
    if channels == 1:
        read1 = _direct_lanes(8)
        once = lambda: float(read1(a))
    else:
        b = lcg.fill(lcg.LcgKind.MMIX, n, seed, dtype)
        read2 = _read2_lanes(8)
        once = lambda: float(read2(a, b))
    best, _, checksum = _time_best_of(once, repetitions, warmup)
    eps = n / best
    return KernelReport(f"read{channels}", "unroll:8", precision, tier.value,
                        n, repetitions, eps, eps / 1e6, checksum, _now(), env)


def run_noread_baseline(method: Method, flavor: Flavor = Flavor.unrolled(),
                        precision: str = "f32", block_elems: int = 4096,
                        repetitions: int = 20, warmup: int = 3,
                        seed: int = lcg.DEFAULT_SEED) -> KernelReport:
    """Compute roof: run the kernel over a cache-resident block repeatedly.

    The block is small enough to live in L1 across repeats, so memory
    traffic is negligible and the rate approximates the per-method
    arithmetic ceiling.
    """
    if repetitions <= 0:
        raise ValueError("repetitions must be positive")
    pinned = pin_to_one_core()
    env = environment_descriptor(TierSizes(), pinned)
    dtype = _DTYPES[precision]
    data = lcg.fill(lcg.LcgKind.NUMERICAL_RECIPES, block_elems, seed, dtype)

    # the repeat loop lives in compiled code: at 256 elements a Python
    # round-trip per call would swamp the arithmetic being measured
    kern, pair = raw_sum_kernel(method, flavor, np.dtype(dtype))
    rep = (_repeat_pair if pair else _repeat_scalar)(kern)
    best, _, checksum = _time_best_of_batched(lambda r: rep(data, r),
                                              repetitions, warmup)
    eps = block_elems / best
    return KernelReport(method.value, str(flavor), precision, Tier.NOREAD.value,
                        block_elems, repetitions, eps, eps / 1e6, checksum,
                        _now(), env)


# ---------------------------------------------------------------------------
# Report emitters.

_COLUMNS = ("method", "flavor", "precision", "tier", "N", "repetitions",
            "elements_per_second", "megaflops", "checksum")


def bench_csv(reports) -> str:
    out = io.StringIO()
    out.write(",".join(_COLUMNS) + "\n")
    for r in reports:
        out.write(f"{r.method},{r.flavor},{r.precision},{r.tier},{r.n},"
                  f"{r.repetitions},{r.best_elements_per_second!r},"
                  f"{r.megaflops!r},{r.checksum!r}\n")
    return out.getvalue()


def bench_markdown(reports) -> str:
    out = io.StringIO()
    out.write("| " + " | ".join(_COLUMNS) + " |\n")
    out.write("|" + "---|" * len(_COLUMNS) + "\n")
    for r in reports:
        out.write(f"| {r.method} | {r.flavor} | {r.precision} | {r.tier} "
                  f"| {r.n} | {r.repetitions} | {r.best_elements_per_second:.6g} "
                  f"| {r.megaflops:.6g} | {r.checksum!r} |\n")
    return out.getvalue()


def ordering_flags(reports) -> list[str]:
    """Soft consistency checks over a report set; returns warning strings.

    Checks the compute-cost ordering rigorous <= fast (with 10% noise
    allowance) wherever both methods were measured on the same cell.
    Flags are advisory: they never fail a run.
    """
    flags = []
    cells = {}
    for r in reports:
        cells[(r.method, r.flavor, r.precision, r.tier)] = r
    for key, r in cells.items():
        if key[0] == Method.TWOFOLD_FAST.value:
            rig = cells.get((Method.TWOFOLD_RIGOROUS.value,) + key[1:])
            if rig and rig.megaflops > 1.10 * r.megaflops:
                flags.append(
                    f"rigorous faster than fast on {key[1:]} "
                    f"({rig.megaflops:.1f} vs {r.megaflops:.1f} Mflop/s)")
    return flags
