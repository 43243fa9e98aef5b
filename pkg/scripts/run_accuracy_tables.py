#!/usr/bin/env python3
"""Generate the full set of accuracy reports and write them to a directory.

Produces, for the default seeds and sizes:
  accuracy_f32_f64.csv    random-sum error grid (both precisions, both
                          generators, both intervals)
  hours100.csv            the 0.1-second / 100-hour counter experiment
  scaling.csv             median |relative error| vs N with fitted slopes

Usage: python scripts/run_accuracy_tables.py [--out-dir reports] [--n 1000000]
"""

import argparse
import pathlib

from twofold.accuracy import (
    accuracy_csv,
    hours100_csv,
    run_accuracy_table,
    run_hours100,
    run_scaling_study,
    scaling_csv,
)


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--out-dir", default="reports", type=pathlib.Path)
    ap.add_argument("--n", default=1_000_000, type=int,
                    help="addends per random-sum cell")
    ap.add_argument("--trials", default=100, type=int,
                    help="trials per size in the scaling study")
    args = ap.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    (args.out_dir / "accuracy_f32_f64.csv").write_text(
        accuracy_csv(run_accuracy_table(n=args.n)))
    (args.out_dir / "hours100.csv").write_text(hours100_csv(run_hours100()))
    (args.out_dir / "scaling.csv").write_text(
        scaling_csv(run_scaling_study(trials=args.trials)))
    print(f"wrote 3 reports to {args.out_dir}/")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
