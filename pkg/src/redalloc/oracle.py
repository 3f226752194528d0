"""Brute-force ground truth for small instances.

Nothing here goes through the search code: the optimum comes from
exhaustive enumeration, and the test-set property is checked on lifted
lattice points against an explicitly built constraint matrix.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EnumerationTooLarge
from .model import Instance, NormalizedInstance
from .testset import constraint_matrix

ENUMERATION_LIMIT = 10**7


@dataclass
class OracleResult:
    optimum: list | None
    opt_cost: int | None
    feasible_count: int

    @property
    def infeasible(self) -> bool:
        return self.optimum is None

    def to_dict(self) -> dict:
        return {
            "status": "infeasible" if self.infeasible else "optimal",
            "optimum": self.optimum,
            "opt_cost": self.opt_cost,
            "feasible_count": self.feasible_count,
        }


def _box_size(lower, upper):
    return math.prod(int(h - l + 1) for l, h in zip(lower, upper))


def brute_force_optimum(inst: Instance, limit: int = ENUMERATION_LIMIT) -> OracleResult:
    """Cheapest reliable configuration by exhaustive enumeration.

    Ties on cost go to the lexicographically smallest configuration in the
    instance's own index order.
    """
    lay = inst.layout
    size = _box_size(lay.lower, lay.upper)
    if size > limit:
        raise EnumerationTooLarge(f"{size} points exceed the enumeration limit {limit}")
    best, best_cost, count = kernels.enumerate_min(
        lay.lower, lay.upper, lay.cost, lay.starts, lay.demand, inst.R0, lay.log1m, lay.base_log
    )
    if best_cost < 0:
        return OracleResult(None, None, int(count))
    return OracleResult(inst.unflatten(best), int(best_cost), int(count))


def _lrp_points(ninst: NormalizedInstance, limit: int) -> np.ndarray:
    lay = ninst.layout
    radix = lay.upper + 1
    size = _box_size(np.zeros_like(lay.upper), lay.upper)
    if size > limit:
        raise EnumerationTooLarge(f"{size} points exceed the enumeration limit {limit}")
    grids = np.meshgrid(*[np.arange(r) for r in radix], indexing="ij")
    X = np.stack([g.ravel() for g in grids], axis=1).astype(np.int64)
    return X


def brute_force_testset_property(ninst: NormalizedInstance, moves, limit: int = 10**6) -> bool:
    """Check the test-set definition on every point of the relaxation's fiber.

    Every feasible point other than the cost-order minimum must have a move
    whose subtraction stays in the fiber and is cheaper in the cost order;
    the minimum must have none.
    """
    A, rhs = constraint_matrix(ninst)
    n, N = ninst.n, sum(ninst.k)
    cvec = A[-1, :N]

    X = _lrp_points(ninst, limit)
    # lift to (x, d, t, b) and keep the fiber's non-negative points
    d = X @ A[:n, :N].T - rhs[:n]
    t = rhs[n:n + N] - X
    b = rhs[-1] - X @ cvec
    Z = np.concatenate([X, d, t, b[:, None]], axis=1)
    Z = Z[(Z >= 0).all(axis=1)]
    if Z.shape[0] == 0:
        return True
    assert ((Z @ A.T) == rhs).all()

    costs = Z[:, :N] @ cvec
    # lexsort: last key is primary; compare on the full lifted vector
    order = np.lexsort(tuple(Z[:, j] for j in range(Z.shape[1] - 1, -1, -1)) + (costs,))
    minimum = order[0]

    vectors = [g.full_vector(N, n) for g in moves]
    improvable = np.zeros(Z.shape[0], dtype=bool)
    for g in vectors:
        W = Z - g
        ok = (W >= 0).all(axis=1)
        if not ok.any():
            continue
        wc = W[:, :N] @ cvec
        cheaper = wc < costs
        tie = wc == costs
        if tie.any():
            diff = W - Z
            nz = diff != 0
            first = np.where(nz.any(axis=1), nz.argmax(axis=1), 0)
            lead = diff[np.arange(Z.shape[0]), first]
            cheaper |= tie & (lead < 0)
        improvable |= ok & cheaper

    if improvable[minimum]:
        return False
    others = np.ones(Z.shape[0], dtype=bool)
    others[minimum] = False
    return bool(improvable[others].all())


def dp_optimum_cost(inst: Instance, per_subsystem_limit: int = 10**6) -> int | None:
    """Exact optimum cost by dynamic programming over subsystems.

    Reliability is a product of subsystem factors, so the problem is a
    multiple-choice knapsack: for every total cost keep the best achievable
    log-reliability. Works well beyond the brute-force range as long as each
    subsystem's own box is enumerable. Returns ``None`` when infeasible.
    """
    options = []
    for i in range(inst.n):
        lo = np.array(inst.l[i], dtype=np.int64)
        hi = np.array(inst.u[i], dtype=np.int64)
        if _box_size(lo, hi) > per_subsystem_limit:
            raise EnumerationTooLarge(f"subsystem {i} box too large")
        grids = np.meshgrid(*[np.arange(a, b + 1) for a, b in zip(lo, hi)], indexing="ij")
        X = np.stack([g.ravel() for g in grids], axis=1)
        X = X[X.sum(axis=1) >= 1]
        if X.shape[0] == 0:
            return None
        c = X @ np.array(inst.c[i], dtype=np.int64)
        logq = X @ np.log1p(-np.array(inst.r[i]))
        val = np.log(-np.expm1(logq))
        best = {}
        for ci, vi in zip(c.tolist(), val.tolist()):
            if ci not in best or vi > best[ci]:
                best[ci] = vi
        options.append(best)

    top = sum(max(o) for o in options)
    cur = np.full(top + 1, -np.inf)
    cur[0] = 0.0
    for o in options:
        nxt = np.full(top + 1, -np.inf)
        for ci, vi in o.items():
            cand = cur[: top + 1 - ci] + vi
            np.maximum(nxt[ci:], cand, out=nxt[ci:])
        cur = nxt
    target = math.log(inst.R0) if inst.R0 > 0 else -np.inf
    hits = np.flatnonzero(np.isfinite(cur) & (cur >= target))
    return int(hits[0]) if hits.size else None
