"""Command-line entry point for the experiment harnesses.

Subcommands map 1:1 to harness operations:

    accuracy         random-sum accuracy table
    hours100         the deterministic 100-hours counter test
    scaling          median-error-vs-N study with fitted slopes
    bench            method x flavor x precision x tier throughput grid
    read-baseline    streaming-read memory roof (1 or 2 channels)
    noread-baseline  cache-resident compute roof for one method
    selftest         strict-rounding and EFT exactness checks

Exit codes: 0 success, 2 invalid flags, 3 broken rounding environment.
Reports go to stdout unless --out is given; metadata lines are prefixed
with '#' and suppressed by --no-meta so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import sys
from datetime import datetime, timezone

from . import accuracy, bench, lcg
from .kernels import Method, Flavor

_METHOD_NAMES = [m.value for m in Method]
_GEN = {"nr": lcg.LcgKind.NUMERICAL_RECIPES, "mmix": lcg.LcgKind.MMIX}
_TIERS = {t.value: t for t in bench.Tier if t is not bench.Tier.NOREAD}


def _parse_methods(text: str) -> list[Method]:
    methods = []
    for name in text.split(","):
        name = name.strip()
        if name not in _METHOD_NAMES:
            raise argparse.ArgumentTypeError(
                f"unknown method {name!r}; valid: {', '.join(_METHOD_NAMES)}")
        methods.append(Method(name))
    return methods


def _parse_flavor(text: str) -> Flavor:
    try:
        return Flavor.parse(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _add_common(p):
    p.add_argument("--format", choices=("csv", "md"), default="md")
    p.add_argument("--out", metavar="PATH", help="write report to a file")
    p.add_argument("--no-meta", action="store_true",
                   help="suppress '#' metadata lines")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="twofold",
        description="value+error summation kernels and their experiments")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("accuracy", help="random-sum accuracy table")
    p.add_argument("--n", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=lcg.DEFAULT_SEED)
    p.add_argument("--precision", choices=("f32", "f64"), action="append")
    p.add_argument("--generator", choices=("nr", "mmix"), action="append")
    p.add_argument("--interval", choices=("unit", "sym"), action="append")
    p.add_argument("--methods", type=_parse_methods,
                   default=list(accuracy.DEFAULT_METHODS))
    _add_common(p)

    p = sub.add_parser("hours100", help="100-hours counter test")
    _add_common(p)

    p = sub.add_parser("scaling", help="median error vs N study")
    p.add_argument("--n", type=int, action="append", dest="ns", metavar="N",
                   help="problem size; repeatable")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--seed", type=int, default=lcg.DEFAULT_SEED)
    p.add_argument("--generator", choices=("nr", "mmix"), default="nr")
    _add_common(p)

    p = sub.add_parser("bench", help="throughput grid")
    p.add_argument("--methods", type=_parse_methods, default=list(Method))
    p.add_argument("--flavor", type=_parse_flavor, action="append",
                   dest="flavors")
    p.add_argument("--precision", choices=("f32", "f64"), action="append")
    p.add_argument("--tier", choices=tuple(_TIERS), action="append")
    p.add_argument("--dot", action="store_true",
                   help="measure dot products instead of sums")
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--warmup", type=int, default=3)
    p.add_argument("--seed", type=int, default=lcg.DEFAULT_SEED)
    _add_common(p)

    p = sub.add_parser("read-baseline", help="streaming-read memory roof")
    p.add_argument("--channels", type=int, choices=(1, 2), default=1)
    p.add_argument("--tier", choices=tuple(_TIERS), default="large")
    p.add_argument("--precision", choices=("f32", "f64"), default="f32")
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--seed", type=int, default=lcg.DEFAULT_SEED)
    _add_common(p)

    p = sub.add_parser("noread-baseline", help="cache-resident compute roof")
    p.add_argument("--methods", type=_parse_methods, default=list(Method))
    p.add_argument("--flavor", type=_parse_flavor, default=Flavor.unrolled())
    p.add_argument("--precision", choices=("f32", "f64"), default="f32")
    p.add_argument("--repetitions", type=int, default=20)
    p.add_argument("--seed", type=int, default=lcg.DEFAULT_SEED)
    _add_common(p)

    p = sub.add_parser("selftest", help="strict-rounding and exactness checks")
    _add_common(p)

    return parser


def _emit(args, body: str, meta_lines) -> None:
    text = ""
    if not args.no_meta:
        stamp = datetime.now(timezone.utc).isoformat(timespec="seconds")
        text += f"# generated {stamp}\n"
        for line in meta_lines:
            text += f"# {line}\n"
    text += body
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2

    if args.command == "accuracy":
        rows = accuracy.run_accuracy_table(
            n=args.n, seed=args.seed, methods=args.methods,
            precisions=tuple(args.precision or accuracy.PRECISIONS),
            generators=tuple(_GEN[g] for g in (args.generator or _GEN)),
            intervals=tuple(args.interval or accuracy.INTERVALS))
        body = (accuracy.accuracy_csv(rows) if args.format == "csv"
                else accuracy.accuracy_markdown(rows))
        _emit(args, body, [f"seed={args.seed} n={args.n}"])
        return 0

    if args.command == "hours100":
        rows = accuracy.run_hours100()
        body = (accuracy.hours100_csv(rows) if args.format == "csv"
                else accuracy.hours100_markdown(rows))
        _emit(args, body, ["3600000 ticks of 0.1 s"])
        return 0

    if args.command == "scaling":
        ns = tuple(args.ns) if args.ns else (10 ** 3, 10 ** 4, 10 ** 5, 10 ** 6)
        study = accuracy.run_scaling_study(ns=ns, trials=args.trials,
                                           seed=args.seed,
                                           generator=_GEN[args.generator])
        body = (accuracy.scaling_csv(study) if args.format == "csv"
                else accuracy.scaling_markdown(study))
        _emit(args, body, [f"seed={args.seed} trials={args.trials}"])
        return 0

    if args.command == "bench":
        reports = bench.run_bench(
            methods=args.methods,
            flavors=tuple(args.flavors or (Flavor.sequential(),)),
            precisions=tuple(args.precision or ("f32", "f64")),
            tiers=tuple(_TIERS[t] for t in (args.tier or _TIERS)),
            dot=args.dot, repetitions=args.repetitions, warmup=args.warmup,
            seed=args.seed)
        body = (bench.bench_csv(reports) if args.format == "csv"
                else bench.bench_markdown(reports))
        meta = [reports[0].environment] if reports else []
        meta += [f"flag: {f}" for f in bench.ordering_flags(reports)]
        _emit(args, body, meta)
        return 0

    if args.command == "read-baseline":
        r = bench.run_read_baseline(args.channels, _TIERS[args.tier],
                                    args.precision, args.repetitions,
                                    seed=args.seed)
        body = (bench.bench_csv([r]) if args.format == "csv"
                else bench.bench_markdown([r]))
        _emit(args, body, [r.environment])
        return 0

    if args.command == "noread-baseline":
        reports = []
        for m in args.methods:
            if m is Method.WIDE and args.precision != "f32":
                continue
            reports.append(bench.run_noread_baseline(
                m, args.flavor, args.precision, repetitions=args.repetitions,
                seed=args.seed))
        body = (bench.bench_csv(reports) if args.format == "csv"
                else bench.bench_markdown(reports))
        _emit(args, body, [reports[0].environment] if reports else [])
        return 0

    if args.command == "selftest":
        from .selftest import run_selftest
        failures = run_selftest()
        if failures:
            for f in failures:
                print(f"FAIL: {f}", file=sys.stderr)
            return 3
        _emit(args, "selftest: ok\n", [])
        return 0

    parser.error(f"unknown command {args.command!r}")
    return 2


if __name__ == "__main__":
    sys.exit(main())
