import json

import numpy as np
import pytest

from redalloc import (BudgetTooSmall, Infeasible, Instance, brute_force_optimum, build_test_set,
                      greedy_budget, is_reliable, less_c, lrp_optimum, normalize, reliability, solve,
                      walk_back)
from redalloc.generator import suite_instances

from conftest import random_small, t1


def prepared(inst):
    y0, ninst = greedy_budget(normalize(inst))
    return ninst, build_test_set(ninst), y0


def test_lrp_optimum_t1():
    ninst, _, _ = prepared(t1())
    assert lrp_optimum(ninst).tolist() == [0, 1]


def test_lrp_optimum_two_subsystems():
    inst = Instance(r=[[0.9, 0.8], [0.9, 0.8]], c=[[7, 4], [9, 2]], u=[[1, 1], [1, 1]], R0=0.1)
    beta = lrp_optimum(normalize(inst))
    assert beta.tolist() == [0, 1, 0, 1]
    assert int(beta @ normalize(inst).layout.cost) == 6


def test_lrp_optimum_equal_costs_takes_later_index():
    inst = Instance(r=[[0.9, 0.8]], c=[[4, 4]], u=[[1, 1]], R0=0.1)
    assert lrp_optimum(normalize(inst)).tolist() == [0, 1]


def test_lrp_optimum_skips_zero_capacity():
    inst = Instance(r=[[0.9, 0.8]], c=[[4, 2]], u=[[1, 0]], R0=0.1)
    assert lrp_optimum(normalize(inst)).tolist() == [1, 0]


def test_lrp_optimum_budget_too_small():
    ninst = normalize(t1()).with_budget(2)
    with pytest.raises(BudgetTooSmall):
        lrp_optimum(ninst)


@pytest.mark.parametrize("a,b,c,expected", [
    ([1, 0], [0, 1], [3, 5], True),
    ([0, 1], [1, 0], [4, 4], True),
    ([1, 0], [0, 1], [4, 4], False),
    ([1, 1], [1, 1], [4, 4], False),
])
def test_less_c(a, b, c, expected):
    assert less_c(a, b, c) is expected


@pytest.mark.parametrize("strategy", ["bestfirst", "paper"])
def test_walk_back_t1(strategy):
    ninst, moves, y0 = prepared(t1())
    report = walk_back(ninst, moves, y0, strategy=strategy, check_invariants=True)
    assert report.optimum == [[1, 1]]
    assert report.opt_cost == 8
    assert report.greedy_cost == 8
    assert report.opt_reliability == pytest.approx(0.98)


def test_reliable_beta_needs_no_expansion():
    inst = Instance(r=[[0.99, 0.95], [0.98]], c=[[9, 2], [3]], u=[[2, 2], [2]], R0=0.5)
    for strategy in ("bestfirst", "paper"):
        report = solve(inst, strategy=strategy)
        assert report.nodes_expanded == 0
        assert report.optimum == [[0, 1], [1]]


def test_table1_n10_k2_zero_nodes():
    for inst in suite_instances("table1", 10, 2, 5, seed=3):
        assert solve(inst).nodes_expanded == 0


def test_infeasible_propagates():
    with pytest.raises(Infeasible):
        solve(Instance(r=[[0.5]], c=[[1]], u=[[1]], R0=0.9))


@pytest.mark.parametrize("seed", range(80))
def test_oracle_equivalence_and_strategies(seed):
    inst = random_small(seed)
    truth = brute_force_optimum(inst)
    best = solve(inst, check_invariants=True)
    paper = solve(inst, strategy="paper", check_invariants=True)
    assert best.opt_cost == paper.opt_cost == truth.opt_cost
    assert is_reliable(inst, best.optimum)
    assert best.opt_cost <= best.greedy_cost
    for row, lo, hi in zip(best.optimum, inst.l, inst.u):
        assert all(a <= v <= b for v, a, b in zip(row, lo, hi))


@pytest.mark.parametrize("seed", range(20))
def test_lower_bounds_against_oracle(seed):
    rng = np.random.default_rng(1000 + seed)
    base = random_small(seed, umax=3)
    l = [[int(rng.integers(0, 2)) if v >= 1 else 0 for v in row] for row in base.u]
    u = [[max(a, v) for a, v in zip(lrow, row)] for lrow, row in zip(l, base.u)]
    top = reliability(Instance(r=base.r, c=base.c, u=u, l=l, R0=0.0), u)
    inst = Instance(r=base.r, c=base.c, u=u, l=l, R0=0.9 * top)
    assert solve(inst).opt_cost == brute_force_optimum(inst).opt_cost


@pytest.mark.parametrize("seed", range(10))
def test_parallel_matches_serial(seed):
    inst = random_small(seed)
    assert solve(inst, workers=3).opt_cost == solve(inst).opt_cost


@pytest.mark.parametrize("seed", range(10))
def test_without_dedup_same_optimum(seed):
    inst = random_small(seed, nmax=3, umax=2)
    assert solve(inst, strategy="paper", dedup=False).opt_cost == solve(inst).opt_cost


@pytest.mark.parametrize("seed", range(20))
def test_early_stop_returns_reliable_point(seed):
    inst = random_small(seed)
    report = solve(inst, strategy="paper", early_stop=True)
    assert is_reliable(inst, report.optimum)
    assert report.opt_cost >= brute_force_optimum(inst).opt_cost
    assert report.opt_cost <= report.greedy_cost


def test_no_revisits_with_dedup():
    inst = random_small(7)
    ninst, moves, y0 = prepared(inst)
    seen = []
    from redalloc import solver
    original = solver._Search.expand

    def spy(self, x, x_cost):
        seen.append(x.tobytes())
        return original(self, x, x_cost)

    solver._Search.expand = spy
    try:
        walk_back(ninst, moves, y0, strategy="paper")
    finally:
        solver._Search.expand = original
    assert len(seen) == len(set(seen))


def test_report_json_fields():
    report = solve(t1())
    doc = json.loads(report.to_json())
    assert list(doc) == ["optimum", "opt_cost", "opt_reliability", "nodes_generated", "nodes_expanded",
                         "nodes_pruned_bound", "nodes_pruned_duplicate", "greedy_cost", "wall_time"]
    assert doc["opt_cost"] == 8


def test_node_limit():
    inst = random_small(7)
    with pytest.raises(RuntimeError):
        solve(inst, strategy="paper", max_nodes=1)
