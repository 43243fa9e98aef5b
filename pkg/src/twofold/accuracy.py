"""Accuracy experiments: random-sum tables, the 100-hours test, scaling study.

All experiments score each method against the exact expansion oracle of
the identical addend sequence.  Twofold methods are scored on
value + error; everything else on the value alone.  Reports are
deterministic byte-for-byte for a fixed invocation (seeds are recorded in
every row).
"""

from __future__ import annotations

import io
import math
from dataclasses import dataclass

import numpy as np

from . import lcg
from .expansion import exact_sum, relative_error
from .kernels import Method, SumResult, run_flavor, Flavor

_SEQ = Flavor.sequential()

PRECISIONS = ("f32", "f64")
_DTYPES = {"f32": np.float32, "f64": np.float64}
INTERVALS = ("unit", "sym")  # [0,1) and [-1,1)

DEFAULT_METHODS = (Method.DIRECT, Method.KAHAN, Method.TWOFOLD_FAST)


@dataclass(frozen=True)
class AccuracyRow:
    precision: str
    generator: str
    interval: str
    method: str
    n: int
    seed: int
    rel_error: float
    valid: bool = True


@dataclass(frozen=True)
class Hours100Row:
    method: str
    result_hours: float
    deviation_hours: float
    estimate_hours: float | None = None


@dataclass(frozen=True)
class ScalingRow:
    n: int
    method: str
    median_abs_rel_error: float


@dataclass(frozen=True)
class ScalingStudy:
    rows: tuple
    slopes: dict  # method name -> fitted log-log slope (None if degenerate)
    trials: int
    seed: int


def _score(method: Method, res: SumResult) -> float:
    """The binary64 quantity a method is judged on."""
    if method in (Method.TWOFOLD_FAST, Method.TWOFOLD_RIGOROUS):
        return float(res.value) + float(res.error)
    return float(res.value)


def run_accuracy_table(n: int = 1_000_000, seed: int = lcg.DEFAULT_SEED,
                       methods=DEFAULT_METHODS, precisions=PRECISIONS,
                       generators=tuple(lcg.LcgKind), intervals=INTERVALS,
                       ) -> list[AccuracyRow]:
    """Random-sum accuracy grid: one row per combination and method.

    Data is generated once per (precision, generator, interval) cell and
    shared by all methods and the oracle.  Wide accumulation is skipped
    for f64 data (the oracle plays that role there).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    generators = tuple(lcg.LcgKind(g) if not isinstance(g, lcg.LcgKind) else g
                       for g in generators)
    rows = []
    for precision in precisions:
        dtype = _DTYPES[precision]
        for gen in generators:
            for interval in intervals:
                data = lcg.fill(gen, n, seed, dtype, sym=(interval == "sym"))
                ref = exact_sum(data)
                for method in methods:
                    if method is Method.WIDE and precision != "f32":
                        continue
                    res = run_flavor(method, _SEQ, data)
                    score = _score(method, res)
                    valid = math.isfinite(score) and not ref.is_zero
                    rel = relative_error(score, ref) if valid else math.nan
                    rows.append(AccuracyRow(precision, gen.value, interval,
                                            method.value, n, seed, rel, valid))
    return rows


def run_hours100() -> list[Hours100Row]:
    """A timer adds 0.1 s on every tick for 100 hours (3.6e6 ticks).

    Counters run in binary32 (direct, kahan, twofold-fast) and in a
    binary64 accumulator (wide).  Results are reported in hours; the
    twofold row reports value + error and its error estimate separately.
    """
    ticks = 3_600_000
    data32 = np.full(ticks, np.float32(0.1), np.float32)
    rows = []

    def dev(hours):
        return abs(100.0 - hours)

    d = run_flavor(Method.DIRECT, _SEQ, data32)
    h = float(d.value) / 3600.0
    rows.append(Hours100Row("direct", h, dev(h)))

    w = run_flavor(Method.WIDE, _SEQ, data32)
    h = float(w.value) / 3600.0
    rows.append(Hours100Row("wide", h, dev(h)))

    k = run_flavor(Method.KAHAN, _SEQ, data32)
    h = float(k.value) / 3600.0
    rows.append(Hours100Row("kahan", h, dev(h)))

    t = run_flavor(Method.TWOFOLD_FAST, _SEQ, data32)
    h = (float(t.value) + float(t.error)) / 3600.0
    rows.append(Hours100Row("twofold-fast", h, dev(h),
                            estimate_hours=float(t.error) / 3600.0))
    return rows


def run_scaling_study(ns=(10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6), trials: int = 100,
                      seed: int = lcg.DEFAULT_SEED,
                      generator: lcg.LcgKind = lcg.LcgKind.NUMERICAL_RECIPES,
                      ) -> ScalingStudy:
    """Median |relative error| vs N for direct and twofold-fast, binary32.

    Each trial draws uniform [0,1) data from its own seed (seed + trial
    index).  Direct is scored on value, twofold-fast on value + error.
    The fitted log-log slope checks the sqrt(N) error-growth model for
    direct summation; a method whose medians hit exact zero gets no slope.
    """
    methods = (Method.DIRECT, Method.TWOFOLD_FAST)
    rows = []
    medians = {m: [] for m in methods}
    for n in ns:
        errs = {m: [] for m in methods}
        for t in range(trials):
            data = lcg.fill(generator, n, seed + t, np.float32)
            ref = exact_sum(data)
            for m in methods:
                res = run_flavor(m, _SEQ, data)
                errs[m].append(abs(relative_error(_score(m, res), ref)))
        for m in methods:
            med = float(np.median(errs[m]))
            medians[m].append(med)
            rows.append(ScalingRow(n, m.value, med))
    slopes = {}
    logn = np.log10(np.asarray(ns, float))
    for m in methods:
        med = np.asarray(medians[m])
        if len(ns) >= 2 and np.all(med > 0):
            slopes[m.value] = float(np.polyfit(logn, np.log10(med), 1)[0])
        else:
            slopes[m.value] = None
    return ScalingStudy(tuple(rows), slopes, trials, seed)


# ---------------------------------------------------------------------------
# Report emitters.  Column order is part of the external contract:
# precision, generator, interval, method, N, seed, rel_error.

def _fmt(x: float) -> str:
    return repr(float(x))


def accuracy_csv(rows) -> str:
    out = io.StringIO()
    out.write("precision,generator,interval,method,N,seed,rel_error\n")
    for r in rows:
        out.write(f"{r.precision},{r.generator},{r.interval},{r.method},"
                  f"{r.n},{r.seed},{_fmt(r.rel_error) if r.valid else 'invalid'}\n")
    return out.getvalue()


def accuracy_markdown(rows) -> str:
    out = io.StringIO()
    out.write("| precision | generator | interval | method | N | seed | rel_error |\n")
    out.write("|---|---|---|---|---|---|---|\n")
    for r in rows:
        rel = _fmt(r.rel_error) if r.valid else "invalid"
        out.write(f"| {r.precision} | {r.generator} | {r.interval} | {r.method} "
                  f"| {r.n} | {r.seed} | {rel} |\n")
    return out.getvalue()


def hours100_csv(rows) -> str:
    out = io.StringIO()
    out.write("method,result_hours,deviation_hours,estimate_hours\n")
    for r in rows:
        est = _fmt(r.estimate_hours) if r.estimate_hours is not None else ""
        out.write(f"{r.method},{_fmt(r.result_hours)},{_fmt(r.deviation_hours)},{est}\n")
    return out.getvalue()


def hours100_markdown(rows) -> str:
    out = io.StringIO()
    out.write("| method | result (h) | deviation (h) | estimate (h) |\n")
    out.write("|---|---|---|---|\n")
    for r in rows:
        est = _fmt(r.estimate_hours) if r.estimate_hours is not None else "-"
        out.write(f"| {r.method} | {_fmt(r.result_hours)} "
                  f"| {_fmt(r.deviation_hours)} | {est} |\n")
    return out.getvalue()


def scaling_csv(study: ScalingStudy) -> str:
    out = io.StringIO()
    out.write("N,method,median_abs_rel_error\n")
    for r in study.rows:
        out.write(f"{r.n},{r.method},{_fmt(r.median_abs_rel_error)}\n")
    for m, s in study.slopes.items():
        out.write(f"slope,{m},{_fmt(s) if s is not None else ''}\n")
    return out.getvalue()


def scaling_markdown(study: ScalingStudy) -> str:
    out = io.StringIO()
    out.write("| N | method | median abs rel error |\n|---|---|---|\n")
    for r in study.rows:
        out.write(f"| {r.n} | {r.method} | {_fmt(r.median_abs_rel_error)} |\n")
    out.write("\n")
    for m, s in study.slopes.items():
        out.write(f"- log-log slope, {m}: "
                  f"{_fmt(s) if s is not None else 'n/a (exact zeros)'}\n")
    return out.getvalue()
