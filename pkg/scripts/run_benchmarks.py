#!/usr/bin/env python3
"""Run the performance-benchmark suite and write one CSV per table.

Produces, in the output directory:
  bench_sum.csv       summation grid: all methods, sequential + unrolled,
                      f32/f64, three working-set tiers
  bench_dot.csv       the same grid for dot products
  baselines.csv       streaming-read roofs (1 and 2 channels, all tiers)
                      and per-method cache-resident compute roofs
  flags.txt           advisory ordering flags (empty when orderings hold)

Rates are best-of-R wall-clock measurements on one pinned core; treat
single runs on shared machines as indicative, not definitive.

Usage: python scripts/run_benchmarks.py [--out-dir reports] [--repetitions 20]
"""

import argparse
import pathlib

from twofold.bench import (
    Tier,
    bench_csv,
    ordering_flags,
    run_bench,
    run_noread_baseline,
    run_read_baseline,
)
from twofold.kernels import Flavor, Method

_ROOF_METHODS = (Method.DIRECT, Method.WIDE, Method.TWOFOLD_FAST,
                 Method.TWOFOLD_RIGOROUS, Method.KAHAN)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="reports", type=pathlib.Path)
    ap.add_argument("--repetitions", default=20, type=int)
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    flavors = (Flavor.sequential(), Flavor.unrolled())
    reps = args.repetitions

    sum_rows = run_bench(flavors=flavors, repetitions=reps)
    (args.out_dir / "bench_sum.csv").write_text(bench_csv(sum_rows))

    dot_rows = run_bench(flavors=flavors, dot=True, repetitions=reps)
    (args.out_dir / "bench_dot.csv").write_text(bench_csv(dot_rows))

    baselines = [run_read_baseline(ch, tier, repetitions=reps)
                 for ch in (1, 2)
                 for tier in (Tier.SMALL, Tier.MEDIUM, Tier.LARGE)]
    baselines += [run_noread_baseline(m, repetitions=reps)
                  for m in _ROOF_METHODS]
    (args.out_dir / "baselines.csv").write_text(bench_csv(baselines))

    flags = ordering_flags(sum_rows + dot_rows + baselines)
    (args.out_dir / "flags.txt").write_text("".join(f + "\n" for f in flags))
    print(f"wrote 3 CSVs and {len(flags)} flag(s) to {args.out_dir}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
