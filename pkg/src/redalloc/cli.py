"""Command line entry point.

    redalloc solve <file> [--strategy paper|bestfirst] [--parallel N] [--early-stop]
    redalloc generate --n N --k K ... [-o file]
    redalloc oracle <file>
    redalloc bench --suite table1|table2|table3 --reps R --seed S [-o file.csv]
    redalloc testset <file>

Exit codes: 0 success, 2 parse error, 3 infeasible, 4 budget or
enumeration guard.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import instance_io
from .errors import BudgetTooSmall, EnumerationTooLarge, Infeasible, InvalidInstance
from .generator import SUITES, GeneratorSpec, bench, bench_csv, generate
from .greedy import greedy_budget
from .model import normalize
from .oracle import brute_force_optimum
from .solver import STRATEGIES, solve
from .testset import build_test_set, dump

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_INFEASIBLE = 3
EXIT_GUARD = 4


def _load(path):
    try:
        return instance_io.load(path)
    except FileNotFoundError:
        raise InvalidInstance(f"{path}: no such file")


def cmd_solve(args):
    inst = _load(args.file)
    report = solve(inst, strategy=args.strategy, workers=args.parallel, early_stop=args.early_stop)
    print(report.to_json(indent=2))


def cmd_oracle(args):
    inst = _load(args.file)
    result = brute_force_optimum(inst)
    print(json.dumps(result.to_dict(), indent=2))


def cmd_testset(args):
    ninst = normalize(_load(args.file))
    _, ninst = greedy_budget(ninst)
    sys.stdout.write(dump(build_test_set(ninst), ninst))


def cmd_generate(args):
    spec = GeneratorSpec(n=args.n, k=args.k, rmin=args.rmin, rmax=args.rmax, cmin=args.cmin,
                         cmax=args.cmax, umax=args.umax, R0=args.r0, mode=args.mode, seed=args.seed)
    try:
        inst = generate(spec)
    except ValueError as exc:
        raise InvalidInstance(str(exc))
    text = instance_io.dumps(inst) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def _parse_rows(text):
    rows = []
    for item in text.split(","):
        n, _, k = item.strip().partition("x")
        rows.append((int(n), int(k)))
    return rows


def cmd_bench(args):
    rows = _parse_rows(args.rows) if args.rows else None
    result = bench(args.suite, args.reps, args.seed, rows=rows, strategy=args.strategy)
    text = bench_csv(result, args.seed, timing=not args.no_timing)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)


def build_parser():
    parser = argparse.ArgumentParser(prog="redalloc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="solve an instance exactly")
    p.add_argument("file")
    p.add_argument("--strategy", choices=STRATEGIES, default="bestfirst")
    p.add_argument("--parallel", type=int, default=1, metavar="N", help="expansion threads")
    p.add_argument("--early-stop", action="store_true", help="paper strategy: stop at the first reliable point")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("oracle", help="brute-force optimum of a small instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("testset", help="print the test set of an instance")
    p.add_argument("file")
    p.set_defaults(func=cmd_testset)

    p = sub.add_parser("generate", help="draw a random instance")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--rmin", type=float, default=0.99)
    p.add_argument("--rmax", type=float, default=0.998)
    p.add_argument("--cmin", type=int, default=10)
    p.add_argument("--cmax", type=int, default=20)
    p.add_argument("--umax", type=int, default=4)
    p.add_argument("--r0", type=float, default=0.90)
    p.add_argument("--mode", choices=("uniform", "ordered"), default="uniform")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("bench", help="run a table's instance grid and write CSV")
    p.add_argument("--suite", choices=sorted(SUITES), required=True)
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--rows", help="subset of the grid, e.g. 10x2,15x3")
    p.add_argument("--strategy", choices=STRATEGIES, default="bestfirst")
    p.add_argument("--no-timing", action="store_true", help="omit the wall-time column")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args.func(args)
    except InvalidInstance as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except Infeasible as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (BudgetTooSmall, EnumerationTooLarge) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_GUARD
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
