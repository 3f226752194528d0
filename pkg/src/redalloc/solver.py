"""Linear-relaxation optimum and the walk-back search for the exact optimum."""
from __future__ import annotations

import heapq
import itertools
import json
import time
from collections import deque
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

import numpy as np

from . import kernels
from .errors import BudgetTooSmall, EmptySubsystemBound
from .greedy import greedy_budget
from .model import Instance, NormalizedInstance, cost, denormalize, normalize, order_key, reliability
from .testset import TestSet, build_test_set

STRATEGIES = ("bestfirst", "paper")


@dataclass
class SolveReport:
    optimum: list
    opt_cost: int
    opt_reliability: float
    nodes_generated: int
    nodes_expanded: int
    nodes_pruned_bound: int
    nodes_pruned_duplicate: int
    greedy_cost: int
    wall_time: float

    def to_dict(self) -> dict:
        return asdict(self)

    def to_json(self, **kwargs) -> str:
        return json.dumps(self.to_dict(), **kwargs)


def lrp_optimum(ninst: NormalizedInstance) -> np.ndarray:
    """Cheapest point of the linear relaxation under the cost order.

    One unit of the cheapest usable component per subsystem that still
    needs one; among equal costs the highest index wins because that
    configuration is lexicographically smaller.
    """
    lay = ninst.layout
    beta = np.zeros(sum(ninst.k), dtype=np.int64)
    for i in range(ninst.n):
        if lay.demand[i] == 0:
            continue
        best = None
        for j in range(lay.starts[i], lay.starts[i + 1]):
            if lay.upper[j] > 0 and (best is None or lay.cost[j] <= lay.cost[best]):
                best = j
        if best is None:
            raise EmptySubsystemBound(f"subsystem {i} has no room for a unit")
        beta[best] = 1
    if ninst.c0 is not None and beta @ lay.cost > ninst.c0:
        raise BudgetTooSmall(f"cheapest relaxed point costs {int(beta @ lay.cost)} > budget {ninst.c0}")
    return beta


class _Search:
    """Shared bookkeeping for both frontier disciplines."""

    def __init__(self, ninst, moves, y0, R0, dedup, check_invariants):
        lay = ninst.layout
        self.lay = lay
        self.budget = int(ninst.c0)
        self.plus = moves.plus
        self.minus = moves.minus
        self.R0 = float(R0)
        self.dedup = dedup
        self.check = check_invariants
        self.visited = set()
        self.generated = 0
        self.expanded = 0
        self.pruned_bound = 0
        self.pruned_duplicate = 0
        self.incumbent = np.asarray(y0, dtype=np.int64)
        self.inc_key = order_key(self.incumbent, lay.cost)

    def expand(self, x, x_cost):
        lay = self.lay
        return kernels.expand(x, x_cost, self.plus, self.minus, lay.upper, lay.cost, lay.sub,
                              lay.starts, lay.demand, self.budget, lay.log1m, lay.base_log)

    def children(self, x, key, result):
        """Yield ``(child, key, reliable)`` for every new feasible child."""
        kids, ok, rel, ccost = result
        for g in np.flatnonzero(ok):
            w = kids[g]
            if self.dedup:
                tag = w.tobytes()
                if tag in self.visited:
                    self.pruned_duplicate += 1
                    continue
                self.visited.add(tag)
            self.generated += 1
            wkey = (int(ccost[g]), tuple(w.tolist()))
            if self.check and not wkey > key:
                raise AssertionError(f"reverse move did not increase the cost order: {key} -> {wkey}")
            yield w, wkey, rel[g] >= self.R0

    def offer(self, w, wkey):
        if wkey < self.inc_key:
            self.incumbent = w.copy()
            self.inc_key = wkey


def walk_back(ninst: NormalizedInstance, moves: TestSet, y0, R0: float | None = None,
              strategy: str = "bestfirst", *, early_stop: bool = False, workers: int = 1,
              dedup: bool = True, check_invariants: bool = False,
              max_nodes: int | None = None) -> SolveReport:
    """Walk up from the relaxed optimum along reversed test-set moves.

    ``strategy="bestfirst"`` pops nodes in cost order and stops as soon as
    nothing cheaper than the incumbent is left. ``strategy="paper"`` keeps
    a FIFO frontier and explores exhaustively, pruning paths that hit a
    reliable point or are dominated by the incumbent. ``early_stop`` (paper
    only) returns the first reliable point found, without an optimality
    proof. ``workers > 1`` expands batches of best-first nodes on a thread
    pool; the optimum is unchanged, counters may differ.
    """
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; pick one of {STRATEGIES}")
    if R0 is None:
        R0 = ninst.R0
    start = time.perf_counter()
    lay = ninst.layout
    beta = lrp_optimum(ninst)
    search = _Search(ninst, moves, y0, R0, dedup, check_invariants)
    beta_key = order_key(beta, lay.cost)
    if dedup:
        search.visited.add(beta.tobytes())

    if kernels.reliability_one(beta, lay.log1m, lay.base_log, lay.starts) >= R0:
        search.offer(beta, beta_key)
    elif strategy == "paper":
        _run_fifo(search, beta, beta_key, early_stop, max_nodes)
    else:
        _run_best_first(search, beta, beta_key, max(1, int(workers)), max_nodes)

    elapsed = time.perf_counter() - start
    best = search.incumbent
    return SolveReport(
        optimum=denormalize(ninst, best),
        opt_cost=cost(ninst, best) + ninst.cost_offset,
        opt_reliability=reliability(ninst, best),
        nodes_generated=search.generated,
        nodes_expanded=search.expanded,
        nodes_pruned_bound=search.pruned_bound,
        nodes_pruned_duplicate=search.pruned_duplicate,
        greedy_cost=int(ninst.c0) + ninst.cost_offset,
        wall_time=round(elapsed, 3),
    )


def _guard(search, max_nodes):
    if max_nodes is not None and search.expanded >= max_nodes:
        raise RuntimeError(f"node limit {max_nodes} reached")


def _run_fifo(search, beta, beta_key, early_stop, max_nodes):
    frontier = deque([(beta, beta_key)])
    while frontier:
        _guard(search, max_nodes)
        x, key = frontier.popleft()
        search.expanded += 1
        result = search.expand(x, key[0])
        for w, wkey, reliable in search.children(x, key, result):
            if reliable:
                search.offer(w, wkey)
                if early_stop:
                    return
            elif search.inc_key < wkey:
                search.pruned_bound += 1
            else:
                frontier.append((w.copy(), wkey))


def _run_best_first(search, beta, beta_key, workers, max_nodes):
    tie = itertools.count()
    heap = [(beta_key, next(tie), beta)]
    last = None
    pool = ThreadPoolExecutor(workers) if workers > 1 else None
    try:
        while heap and heap[0][0] < search.inc_key:
            batch = []
            while heap and len(batch) < workers and heap[0][0] < search.inc_key:
                key, _, x = heapq.heappop(heap)
                batch.append((key, x))
            if search.check and workers == 1:
                for key, _ in batch:
                    if last is not None and key < last:
                        raise AssertionError("best-first dequeue order went backwards")
                    last = key
            _guard(search, max_nodes)
            if pool is None:
                results = [search.expand(x, key[0]) for key, x in batch]
            else:
                results = list(pool.map(lambda item: search.expand(item[1], item[0][0]), batch))
            for (key, x), result in zip(batch, results):
                search.expanded += 1
                for w, wkey, reliable in search.children(x, key, result):
                    if reliable:
                        search.offer(w, wkey)
                    elif search.inc_key < wkey:
                        search.pruned_bound += 1
                    else:
                        heapq.heappush(heap, (wkey, next(tie), w.copy()))
    finally:
        if pool is not None:
            pool.shutdown()


def solve(inst: Instance, strategy: str = "bestfirst", **kwargs) -> SolveReport:
    """Normalize, run the greedy, build the test set and walk back."""
    ninst = normalize(inst)
    y0, ninst = greedy_budget(ninst)
    moves = build_test_set(ninst)
    return walk_back(ninst, moves, y0, strategy=strategy, **kwargs)
