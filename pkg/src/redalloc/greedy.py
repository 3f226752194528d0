"""Greedy construction of a reliable starting point and the budget cut."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import kernels
from .errors import EmptySubsystemBound, Infeasible
from .model import NormalizedInstance, cost, reliability


@dataclass(frozen=True)
class GreedyRate:
    index: tuple[int, int]
    rate: float


def rates(ninst: NormalizedInstance) -> list[GreedyRate]:
    """Cost per unit of log-unreliability removed, most expensive first.

    Ties fall back to (subsystem, component) ascending.
    """
    out = []
    for i, (rrow, crow) in enumerate(zip(ninst.base.r, ninst.base.c)):
        for j, (rv, cv) in enumerate(zip(rrow, crow)):
            out.append(GreedyRate((i, j), cv / -math.log1p(-rv)))
    out.sort(key=lambda g: (-g.rate, g.index))
    return out


def greedy_feasible(ninst: NormalizedInstance, R0: float | None = None) -> np.ndarray:
    """Start from the upper bounds and strip units while the point stays reliable.

    Components are visited in :func:`rates` order. Each one is decremented
    until the system would drop below ``R0``, its subsystem would empty, or
    the coordinate hits zero; the last offending decrement is undone.
    Returns the flat normalized configuration; its cost is the budget
    ``c0`` for :meth:`NormalizedInstance.with_budget`.
    """
    if R0 is None:
        R0 = ninst.R0
    lay = ninst.layout
    sums = np.add.reduceat(lay.upper, lay.starts[:-1])
    empty = np.flatnonzero(sums < lay.demand)
    if empty.size:
        raise EmptySubsystemBound(f"subsystem {int(empty[0])} has no room for a unit")
    if reliability(ninst, lay.upper) < R0:
        raise Infeasible("reliability at the upper bounds is below R0")

    order = np.array([lay.starts[g.index[0]] + g.index[1] for g in rates(ninst)], dtype=np.int64)
    y = lay.upper.copy()
    return kernels.greedy_descent(y, order, lay.sub, lay.starts, lay.demand, float(R0), lay.log1m, lay.base_log)


def greedy_budget(ninst: NormalizedInstance, R0: float | None = None) -> tuple[np.ndarray, NormalizedInstance]:
    """Run the greedy and return ``(y0, instance with c0 = cost(y0))``."""
    y0 = greedy_feasible(ninst, R0)
    return y0, ninst.with_budget(cost(ninst, y0))
