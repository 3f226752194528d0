"""Random instances following the published experiment protocols, and the
benchmark driver that solves them row by row.

Costs are drawn as integers on ``[cmin, cmax]``; the test-set moves carry
cost differences as lattice coordinates, which must be integral.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass, replace

import numpy as np

from .errors import RedAllocError
from .model import Instance
from .solver import solve

RNG_NAME = f"numpy.random.PCG64 (numpy {np.__version__})"


@dataclass(frozen=True)
class GeneratorSpec:
    n: int
    k: int | tuple
    rmin: float
    rmax: float
    cmin: int
    cmax: int
    umax: int
    R0: float
    mode: str = "uniform"
    seed: int = 0

    def validate(self):
        if self.n < 1:
            raise ValueError("n must be >= 1")
        ks = [self.k] * self.n if isinstance(self.k, int) else list(self.k)
        if len(ks) != self.n or any(ki < 1 for ki in ks):
            raise ValueError("k must be a positive integer or one positive integer per subsystem")
        if not 0.0 < self.rmin <= self.rmax < 1.0:
            raise ValueError("need 0 < rmin <= rmax < 1")
        if not 1 <= self.cmin <= self.cmax:
            raise ValueError("need 1 <= cmin <= cmax")
        if self.umax < 1:
            raise ValueError("umax must be >= 1")
        if self.mode not in ("uniform", "ordered"):
            raise ValueError("mode is 'uniform' or 'ordered'")
        return ks


def generate(spec: GeneratorSpec, rng: np.random.Generator | None = None) -> Instance:
    """Draw one instance; ``l = 0`` and ``u = umax`` everywhere.

    In ``ordered`` mode the reliabilities and costs of each subsystem are
    sorted together, so a more reliable component never costs less.
    """
    ks = spec.validate()
    if rng is None:
        rng = np.random.Generator(np.random.PCG64(spec.seed))
    r, c, u = [], [], []
    for ki in ks:
        rr = rng.uniform(spec.rmin, spec.rmax, size=ki)
        cc = rng.integers(spec.cmin, spec.cmax, size=ki, endpoint=True)
        if spec.mode == "ordered":
            rr = np.sort(rr)
            cc = np.sort(cc)
        r.append([float(v) for v in rr])
        c.append([int(v) for v in cc])
        u.append([spec.umax] * ki)
    return Instance(r=r, c=c, u=u, R0=spec.R0)


_TABLE12 = dict(rmin=0.99, rmax=0.998, cmin=10, cmax=20, umax=4, R0=0.90)
SUITES = {
    "table1": (GeneratorSpec(n=1, k=1, mode="uniform", **_TABLE12),
               [(10, 2), (10, 3), (10, 5), (15, 2), (15, 3), (20, 2)]),
    "table2": (GeneratorSpec(n=1, k=1, mode="ordered", **_TABLE12),
               [(10, 2), (10, 3), (10, 5), (15, 2), (15, 3), (15, 4), (17, 2)]),
    "table3": (GeneratorSpec(n=1, k=1, mode="ordered", rmin=0.98, rmax=0.99, cmin=10, cmax=20, umax=4, R0=0.90),
               [(6, 4), (6, 5), (7, 4), (7, 5), (8, 4)]),
}

CSV_FIELDS = ["suite", "n", "k", "reps", "mean_nodes_generated", "mean_nodes_expanded",
              "mean_wall_time", "mean_opt_cost", "status"]


@dataclass
class BenchRow:
    suite: str
    n: int
    k: int
    reps: int
    mean_nodes_generated: float
    mean_nodes_expanded: float
    mean_wall_time: float
    mean_opt_cost: float
    status: str
    reports: list


def suite_instances(suite: str, n: int, k: int, reps: int, seed: int) -> list[Instance]:
    """The ``reps`` instances of one table row, reproducible from ``seed``."""
    base, _ = SUITES[suite]
    rng = np.random.Generator(np.random.PCG64(np.random.SeedSequence([seed, n, k])))
    spec = replace(base, n=n, k=k)
    return [generate(spec, rng) for _ in range(reps)]


def bench_row(suite: str, n: int, k: int, reps: int, seed: int, **solve_kwargs) -> BenchRow:
    reports = []
    status = "ok"
    try:
        for inst in suite_instances(suite, n, k, reps, seed):
            reports.append(solve(inst, **solve_kwargs))
    except (RedAllocError, RuntimeError) as exc:
        status = f"error:{type(exc).__name__}"

    def mean(attr):
        return float(np.mean([getattr(rep, attr) for rep in reports])) if reports else float("nan")

    return BenchRow(suite, n, k, reps, mean("nodes_generated"), mean("nodes_expanded"),
                    mean("wall_time"), mean("opt_cost"), status, reports)


def bench(suite: str, reps: int, seed: int, rows=None, **solve_kwargs) -> list[BenchRow]:
    if suite not in SUITES:
        raise ValueError(f"unknown suite {suite!r}; choose from {sorted(SUITES)}")
    grid = SUITES[suite][1] if rows is None else rows
    return [bench_row(suite, n, k, reps, seed, **solve_kwargs) for n, k in grid]


def bench_csv(rows: list[BenchRow], seed: int, timing: bool = True) -> str:
    """CSV text with a ``#`` header line naming the generator and seed.

    ``timing=False`` drops the wall-time column so the output is
    byte-for-byte reproducible.
    """
    fields = CSV_FIELDS if timing else [f for f in CSV_FIELDS if f != "mean_wall_time"]
    buf = io.StringIO()
    buf.write(f"# rng={RNG_NAME} seed={seed}\n")
    writer = csv.DictWriter(buf, fieldnames=fields, lineterminator="\n", extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        writer.writerow({
            "suite": row.suite, "n": row.n, "k": row.k, "reps": row.reps,
            "mean_nodes_generated": f"{row.mean_nodes_generated:.1f}",
            "mean_nodes_expanded": f"{row.mean_nodes_expanded:.1f}",
            "mean_wall_time": f"{row.mean_wall_time:.3f}",
            "mean_opt_cost": f"{row.mean_opt_cost:.1f}",
            "status": row.status,
        })
    return buf.getvalue()
