"""Problem data, reliability/cost evaluation and instance normalization."""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import NamedTuple, Sequence

import numpy as np

from . import kernels
from .errors import InvalidInstance, ShapeError

MAX_UPPER = 10**6


class FlatLayout(NamedTuple):
    """Flat arrays consumed by :mod:`redalloc.kernels`."""

    log1m: np.ndarray
    base_log: np.ndarray
    starts: np.ndarray
    sub: np.ndarray
    cost: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    demand: np.ndarray


def _ragged(name, values, k, kind):
    if not isinstance(values, (list, tuple)) or len(values) != len(k):
        raise InvalidInstance(f"{name}: expected {len(k)} rows, got {values!r:.60}")
    rows = []
    for i, (row, ki) in enumerate(zip(values, k)):
        if not isinstance(row, (list, tuple)) or len(row) != ki:
            raise InvalidInstance(f"{name}[{i}]: expected {ki} entries")
        out = []
        for j, v in enumerate(row):
            if kind is int:
                if isinstance(v, bool) or not isinstance(v, (int, np.integer)):
                    if isinstance(v, float) and v.is_integer():
                        v = int(v)
                    else:
                        raise InvalidInstance(f"{name}[{i}][{j}]: expected an integer, got {v!r}")
                out.append(int(v))
            else:
                if isinstance(v, bool) or not isinstance(v, (int, float, np.floating, np.integer)):
                    raise InvalidInstance(f"{name}[{i}][{j}]: expected a number, got {v!r}")
                out.append(float(v))
        rows.append(tuple(out))
    return tuple(rows)


@dataclass(frozen=True)
class Instance:
    """Raw redundancy-allocation data.

    ``r``, ``c``, ``l`` and ``u`` are ragged: row ``i`` holds the ``k[i]``
    component types available to subsystem ``i``. Indices are 0-based.
    """

    r: tuple
    c: tuple
    u: tuple
    R0: float
    l: tuple = None

    def __post_init__(self):
        if not isinstance(self.r, (list, tuple)) or len(self.r) == 0:
            raise InvalidInstance("r: need at least one subsystem")
        k = [len(row) if isinstance(row, (list, tuple)) else -1 for row in self.r]
        if any(ki < 1 for ki in k):
            raise InvalidInstance("r: every subsystem needs at least one component type")
        r = _ragged("r", self.r, k, float)
        c = _ragged("c", self.c, k, int)
        u = _ragged("u", self.u, k, int)
        l = _ragged("l", self.l, k, int) if self.l is not None else tuple((0,) * ki for ki in k)
        for i in range(len(k)):
            for j in range(k[i]):
                if not 0.0 < r[i][j] < 1.0:
                    raise InvalidInstance(f"r[{i}][{j}]: must lie strictly between 0 and 1")
                if c[i][j] < 1:
                    raise InvalidInstance(f"c[{i}][{j}]: costs must be positive integers")
                if l[i][j] < 0:
                    raise InvalidInstance(f"l[{i}][{j}]: must be >= 0")
                if u[i][j] < l[i][j]:
                    raise InvalidInstance(f"u[{i}][{j}]: upper bound below lower bound")
                if u[i][j] > MAX_UPPER:
                    raise InvalidInstance(f"u[{i}][{j}]: exceeds {MAX_UPPER}")
        R0 = self.R0
        if isinstance(R0, bool) or not isinstance(R0, (int, float, np.floating)) or not 0.0 <= R0 < 1.0:
            raise InvalidInstance(f"R0: must be a number in [0, 1), got {R0!r}")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "l", l)
        object.__setattr__(self, "R0", float(R0))

    @property
    def n(self) -> int:
        return len(self.r)

    @property
    def k(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.r)

    @property
    def size(self) -> int:
        return sum(self.k)

    @cached_property
    def layout(self) -> FlatLayout:
        k = self.k
        starts = np.concatenate([[0], np.cumsum(k)]).astype(np.int64)
        return FlatLayout(
            log1m=np.log1p(-np.array([v for row in self.r for v in row])),
            base_log=np.zeros(self.n),
            starts=starts,
            sub=np.repeat(np.arange(self.n, dtype=np.int64), k),
            cost=np.array([v for row in self.c for v in row], dtype=np.int64),
            lower=np.array([v for row in self.l for v in row], dtype=np.int64),
            upper=np.array([v for row in self.u for v in row], dtype=np.int64),
            demand=np.ones(self.n, dtype=np.int64),
        )

    def flatten(self, x) -> np.ndarray:
        """Accept a ragged or flat configuration, return a flat int64 copy."""
        return _flatten(x, self.k)

    def unflatten(self, x) -> list[list[int]]:
        starts = self.layout.starts
        return [[int(v) for v in x[starts[i]:starts[i + 1]]] for i in range(self.n)]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "k": list(self.k),
            "r": [list(row) for row in self.r],
            "c": [list(row) for row in self.c],
            "l": [list(row) for row in self.l],
            "u": [list(row) for row in self.u],
            "R0": self.R0,
        }


def _flatten(x, k) -> np.ndarray:
    if isinstance(x, np.ndarray) and x.ndim == 1:
        flat = x.astype(np.int64)
    elif isinstance(x, (list, tuple)) and len(x) > 0 and all(isinstance(row, (list, tuple, np.ndarray)) for row in x):
        if len(x) != len(k) or any(len(row) != ki for row, ki in zip(x, k)):
            raise ShapeError(f"configuration shape {[len(row) for row in x]} does not match k={list(k)}")
        flat = np.array([v for row in x for v in row], dtype=np.int64)
    else:
        flat = np.asarray(x, dtype=np.int64).ravel()
    if flat.shape[0] != sum(k):
        raise ShapeError(f"configuration has {flat.shape[0]} entries, instance has {sum(k)}")
    return flat.copy()


@dataclass(frozen=True)
class NormalizedInstance:
    """Instance with lower bounds shifted out and costs sorted descending.

    ``perm[i][j]`` is the original index of normalized component ``j`` of
    subsystem ``i``. ``demand[i]`` is the number of units subsystem ``i``
    still needs once its fixed lower-bound units are counted (0 or 1).
    ``c0`` is the budget for the linear cut; it is ``None`` until
    :func:`with_budget` is applied.
    """

    base: Instance
    perm: tuple
    baseline_unrel: tuple
    demand: tuple
    cost_offset: int
    original: Instance = field(repr=False)
    c0: int | None = None

    @property
    def n(self) -> int:
        return self.base.n

    @property
    def k(self) -> tuple[int, ...]:
        return self.base.k

    @property
    def R0(self) -> float:
        return self.base.R0

    @cached_property
    def layout(self) -> FlatLayout:
        lay = self.base.layout
        base_log = np.array(
            [sum(lv * math.log1p(-rv) for lv, rv in zip(lrow, rrow))
             for lrow, rrow in zip(self.original.l, self.original.r)]
        )
        return lay._replace(base_log=base_log, demand=np.array(self.demand, dtype=np.int64))

    def with_budget(self, c0: int) -> "NormalizedInstance":
        return replace(self, c0=int(c0))

    def flatten(self, x) -> np.ndarray:
        return _flatten(x, self.k)

    def unflatten(self, x) -> list[list[int]]:
        return self.base.unflatten(x)


@dataclass(frozen=True)
class SlackVector:
    d: np.ndarray
    t: np.ndarray
    b: int

    def feasible(self) -> bool:
        return bool((self.d >= 0).all() and (self.t >= 0).all() and self.b >= 0)


def _layout_of(inst):
    if isinstance(inst, (Instance, NormalizedInstance)):
        return inst.layout
    raise TypeError(f"expected an Instance or NormalizedInstance, got {type(inst).__name__}")


def reliability(inst, x) -> float:
    """System reliability of configuration ``x``.

    For a normalized instance the units fixed by the original lower bounds
    are included.
    """
    lay = _layout_of(inst)
    flat = inst.flatten(x)
    if (flat < 0).any():
        raise ShapeError("configuration entries must be non-negative")
    return float(kernels.reliability_one(flat, lay.log1m, lay.base_log, lay.starts))


def is_reliable(inst, x, R0: float | None = None) -> bool:
    if R0 is None:
        R0 = inst.R0
    return reliability(inst, x) >= R0


def cost(inst, x) -> int:
    lay = _layout_of(inst)
    return int(inst.flatten(x) @ lay.cost)


def slacks(ninst: NormalizedInstance, x) -> SlackVector:
    if ninst.c0 is None:
        raise ValueError("budget c0 is not set on this instance")
    lay = ninst.layout
    flat = ninst.flatten(x)
    d = np.add.reduceat(flat, lay.starts[:-1]) - lay.demand
    t = lay.upper - flat
    b = int(ninst.c0 - flat @ lay.cost)
    return SlackVector(d=d, t=t, b=b)


def lrp_feasible(ninst: NormalizedInstance, x) -> bool:
    flat = ninst.flatten(x)
    return bool((flat >= 0).all()) and slacks(ninst, flat).feasible()


def normalize(inst: Instance) -> NormalizedInstance:
    """Shift out lower bounds and sort each subsystem by descending cost.

    Ties keep the original order. A subsystem whose lower bounds already
    place a unit gets demand 0, so the shifted problem does not ask for an
    extra one.
    """
    perm, r, c, u = [], [], [], []
    baseline = []
    demand = []
    for i in range(inst.n):
        order = sorted(range(inst.k[i]), key=lambda j: (-inst.c[i][j], j))
        perm.append(tuple(order))
        r.append(tuple(inst.r[i][j] for j in order))
        c.append(tuple(inst.c[i][j] for j in order))
        u.append(tuple(inst.u[i][j] - inst.l[i][j] for j in order))
        baseline.append(math.prod((1.0 - rv) ** lv for rv, lv in zip(inst.r[i], inst.l[i])))
        demand.append(max(0, 1 - sum(inst.l[i])))
    base = Instance(r=tuple(r), c=tuple(c), u=tuple(u), R0=inst.R0)
    offset = sum(cv * lv for crow, lrow in zip(inst.c, inst.l) for cv, lv in zip(crow, lrow))
    return NormalizedInstance(
        base=base,
        perm=tuple(perm),
        baseline_unrel=tuple(baseline),
        demand=tuple(demand),
        cost_offset=offset,
        original=inst,
    )


def denormalize(ninst: NormalizedInstance, x) -> list[list[int]]:
    """Map a normalized configuration back to original indices and bounds."""
    rows = ninst.unflatten(ninst.flatten(x))
    out = []
    for i, row in enumerate(rows):
        orig = [0] * len(row)
        for j_norm, j_orig in enumerate(ninst.perm[i]):
            orig[j_orig] = row[j_norm]
        out.append([v + lv for v, lv in zip(orig, ninst.original.l[i])])
    return out


def to_normalized(ninst: NormalizedInstance, x) -> np.ndarray:
    """Inverse of :func:`denormalize` (original configuration to flat normalized)."""
    rows = ninst.original.unflatten(ninst.original.flatten(x))
    flat = []
    for i, row in enumerate(rows):
        for j_orig in ninst.perm[i]:
            flat.append(row[j_orig] - ninst.original.l[i][j_orig])
    return np.array(flat, dtype=np.int64)


def order_key(x, cost_vec) -> tuple:
    """Sort key realising the cost order with lexicographic tie-break.

    Smaller key means earlier in the order; tuple comparison on ``x`` is
    exactly the lexicographic comparison with the first variable most
    significant.
    """
    flat = np.asarray(x, dtype=np.int64)
    return (int(flat @ cost_vec), tuple(int(v) for v in flat))


def less_c(a, b, cost_vec) -> bool:
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    cost_vec = np.asarray(cost_vec, dtype=np.int64)
    if a.shape != b.shape or a.shape != cost_vec.shape:
        raise ShapeError("less_c: operands and cost vector must share a shape")
    return order_key(a, cost_vec) < order_key(b, cost_vec)
