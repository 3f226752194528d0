"""Time the numba kernels against their numpy fallbacks.

Two parts:

* kernel micro-benchmarks, calling ``*_nb`` and ``*_np`` side by side on the
  same inputs (compile time excluded by a warm-up call);
* an end-to-end solve of a table row, run once per backend in a fresh
  interpreter so the ``REDALLOC_DISABLE_NUMBA`` switch takes effect.

    python benchmarks/bench_backends.py [--repeat 5] [--row 10x3] [--reps 5]
"""
from __future__ import annotations

import argparse
import json
import os
import subprocess
import sys
import timeit

import numpy as np

from redalloc import kernels
from redalloc._accel import HAVE_NUMBA
from redalloc.generator import suite_instances
from redalloc.greedy import greedy_budget, rates
from redalloc.model import normalize
from redalloc.solver import lrp_optimum
from redalloc.testset import build_test_set

SOLVE_SNIPPET = """
import json, sys, time
from redalloc._accel import backend_name
from redalloc.generator import suite_instances
from redalloc.solver import solve
n, k, reps = map(int, sys.argv[1:4])
insts = suite_instances("table1", n, k, reps, 0)
solve(insts[0])  # warm-up (jit compile / cache load)
t = time.perf_counter()
costs = [solve(inst).opt_cost for inst in insts]
print(json.dumps({"backend": backend_name(), "seconds": time.perf_counter() - t, "costs": costs}))
"""


def _best(fn, repeat, number):
    return min(timeit.repeat(fn, repeat=repeat, number=number)) / number


def kernel_cases(n, k):
    inst = suite_instances("table1", n, k, 1, 0)[0]
    ninst = normalize(inst)
    y0, ninst = greedy_budget(ninst)
    lay = ninst.layout
    moves = build_test_set(ninst)
    beta = lrp_optimum(ninst)
    beta_cost = int(beta @ lay.cost)
    rng = np.random.default_rng(0)
    X = rng.integers(0, lay.upper + 1, size=(4096, lay.upper.size)).astype(np.int64)
    order = np.array([g.index for g in rates(ninst)], dtype=np.int64)
    order = np.array([lay.starts[i] + j for i, j in order], dtype=np.int64)

    small = suite_instances("table3", 3, 3, 1, 0)[0]
    slay = small.layout

    yield "reliability_batch (4096 pts)", (X, lay.log1m, lay.base_log, lay.starts)
    yield "expand (one node)", (beta, beta_cost, moves.plus, moves.minus, lay.upper, lay.cost, lay.sub,
                                lay.starts, lay.demand, int(ninst.c0), lay.log1m, lay.base_log)
    yield "greedy_descent", (lay.upper.copy(), order, lay.sub, lay.starts, lay.demand, ninst.R0,
                             lay.log1m, lay.base_log)
    yield "enumerate_min (5^9 box)", (slay.lower, slay.upper, slay.cost, slay.starts, slay.demand,
                                       small.R0, slay.log1m, slay.base_log)


def bench_kernels(n, k, repeat):
    print(f"{'kernel':32s} {'numba [ms]':>12s} {'numpy [ms]':>12s} {'speed-up':>9s}")
    for label, args in kernel_cases(n, k):
        stem = label.split()[0]
        number = 1 if stem == "enumerate_min" else 20

        def call(suffix, args=args, stem=stem):
            # greedy_descent mutates its first argument
            fn = getattr(kernels, f"{stem}_{suffix}")
            return lambda: fn(*[a.copy() if isinstance(a, np.ndarray) else a for a in args])

        call("nb")()  # compile
        t_nb = _best(call("nb"), repeat, number)
        t_np = _best(call("np"), repeat, number)
        print(f"{label:32s} {t_nb * 1e3:12.3f} {t_np * 1e3:12.3f} {t_np / t_nb:8.1f}x")


def bench_solve(n, k, reps):
    results = []
    for disable in ("0", "1"):
        env = dict(os.environ, REDALLOC_DISABLE_NUMBA=disable)
        out = subprocess.run([sys.executable, "-c", SOLVE_SNIPPET, str(n), str(k), str(reps)],
                             env=env, capture_output=True, text=True, check=True)
        results.append(json.loads(out.stdout))
    for res in results:
        print(f"solve table1 {n}x{k} x{reps} [{res['backend']:5s}] {res['seconds']:8.3f} s")
    same = results[0]["costs"] == results[1]["costs"]
    print(f"optimal costs identical across backends: {same}")
    return same


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--row", default="10x3", help="table1 row for the kernel inputs and solve, NxK")
    parser.add_argument("--reps", type=int, default=5)
    args = parser.parse_args(argv)
    if not HAVE_NUMBA:
        sys.exit("numba is not importable; nothing to compare")
    n, k = map(int, args.row.split("x"))
    bench_kernels(n, k, args.repeat)
    print()
    return 0 if bench_solve(n, k, args.reps) else 1


if __name__ == "__main__":
    sys.exit(main())
