"""Closed-form test set for the linear relaxation, plus lattice checks.

Lattice coordinates are ordered ``(x, d, t, b)``: ``N`` component counts,
``n`` subsystem surpluses, ``N`` upper-bound headrooms and the remaining
budget. A move ``g`` is subtracted to descend in cost and added to walk
back up.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import NotNormalized, ShapeError
from .model import NormalizedInstance

REMOVE = "RemoveOne"
SWAP = "SwapDown"


@dataclass(frozen=True)
class TestMove:
    """One test-set element.

    ``RemoveOne`` drops a unit of component ``q``; ``SwapDown`` trades a unit
    of the pricier ``q`` for the cheaper ``p`` (``q < p``) in subsystem ``i``.
    ``plus``/``minus`` are the flat positions whose count rises/falls when the
    move is *reversed*; ``minus`` is -1 for ``RemoveOne``.
    """

    __test__ = False  # keep pytest from collecting this class

    kind: str
    i: int
    q: int
    p: int | None
    plus: int
    minus: int
    b_exponent: int

    def x_delta(self, nvar: int) -> np.ndarray:
        dx = np.zeros(nvar, dtype=np.int64)
        dx[self.plus] += 1
        if self.minus >= 0:
            dx[self.minus] -= 1
        return dx

    def full_vector(self, N: int, n: int) -> np.ndarray:
        """The move as an integer vector over (x, d, t, b)."""
        g = np.zeros(2 * N + n + 1, dtype=np.int64)
        if self.kind == REMOVE:
            g[self.plus] = 1
            g[N + self.i] = 1
            g[N + n + self.plus] = -1
        else:
            g[self.plus] = 1
            g[self.minus] = -1
            g[N + n + self.minus] = 1
            g[N + n + self.plus] = -1
        g[-1] = -self.b_exponent
        return g

    def describe(self) -> str:
        if self.kind == REMOVE:
            return f"{REMOVE} i={self.i + 1} k={self.q + 1} b^{self.b_exponent}"
        return f"{SWAP} i={self.i + 1} q={self.q + 1} p={self.p + 1} b^{self.b_exponent}"


class TestSet(tuple):
    """Immutable sequence of moves with the flat index arrays the kernels use."""

    __test__ = False

    def __new__(cls, moves):
        self = super().__new__(cls, moves)
        self.plus = np.array([g.plus for g in self], dtype=np.int64)
        self.minus = np.array([g.minus for g in self], dtype=np.int64)
        return self


def check_normalized(ninst: NormalizedInstance):
    for i, row in enumerate(ninst.base.c):
        for q in range(len(row) - 1):
            if row[q] < row[q + 1]:
                raise NotNormalized(f"subsystem {i}: costs must be non-increasing, got {list(row)}")


def build_test_set(ninst: NormalizedInstance) -> TestSet:
    """All ``RemoveOne`` moves by (i, k), then all ``SwapDown`` by (i, q, p)."""
    check_normalized(ninst)
    starts = ninst.layout.starts
    c = ninst.base.c
    moves = []
    for i, ki in enumerate(ninst.k):
        for q in range(ki):
            moves.append(TestMove(REMOVE, i, q, None, int(starts[i] + q), -1, c[i][q]))
    for i, ki in enumerate(ninst.k):
        for q in range(ki):
            for p in range(q + 1, ki):
                moves.append(TestMove(SWAP, i, q, p, int(starts[i] + q), int(starts[i] + p), c[i][q] - c[i][p]))
    return TestSet(moves)


def constraint_matrix(ninst: NormalizedInstance) -> tuple[np.ndarray, np.ndarray]:
    """Dense equality system ``A z = rhs`` of the relaxation with slacks.

    Rows: subsystem rows ``(D | -I_n | 0 | 0)``, bound rows
    ``(I_N | 0 | I_N | 0)`` and the budget row ``(c | 0 | 0 | 1)``.
    """
    if ninst.c0 is None:
        raise ValueError("budget c0 is not set on this instance")
    k = ninst.k
    n, N = len(k), sum(k)
    A = np.zeros((n + N + 1, 2 * N + n + 1), dtype=np.int64)
    col = 0
    for i, ki in enumerate(k):
        A[i, col:col + ki] = 1
        col += ki
    A[:n, N:N + n] = -np.eye(n, dtype=np.int64)
    A[n:n + N, :N] = np.eye(N, dtype=np.int64)
    A[n:n + N, N + n:2 * N + n] = np.eye(N, dtype=np.int64)
    A[-1, :N] = [cv for row in ninst.base.c for cv in row]
    A[-1, -1] = 1
    rhs = np.concatenate([
        np.array(ninst.demand, dtype=np.int64),
        np.array([uv for row in ninst.base.u for uv in row], dtype=np.int64),
        [ninst.c0],
    ]).astype(np.int64)
    return A, rhs


def lift(ninst: NormalizedInstance, x) -> np.ndarray:
    """Append the slack coordinates (d, t, b) to a configuration."""
    A, rhs = constraint_matrix(ninst)
    n, N = ninst.n, sum(ninst.k)
    flat = np.asarray(x, dtype=np.int64)
    d = A[:n, :N] @ flat - rhs[:n]
    t = rhs[n:n + N] - flat
    b = rhs[-1] - A[-1, :N] @ flat
    return np.concatenate([flat, d, t, [b]])


def kernel_check(A: np.ndarray, g) -> bool:
    """True iff ``A @ g == 0`` in exact integer arithmetic.

    ``g`` is a :class:`TestMove` or an explicit lattice vector.
    """
    if isinstance(g, TestMove):
        N = A.shape[1] - A.shape[0]
        vec = g.full_vector(N, A.shape[0] - N - 1)
    else:
        vec = np.asarray(g)
    if vec.dtype.kind not in "iu":
        raise TypeError("kernel_check works on integer vectors")
    if A.shape[1] != vec.shape[0]:
        raise ShapeError(f"matrix has {A.shape[1]} columns, vector has {vec.shape[0]} entries")
    return bool(not np.any(A.astype(object) @ vec.astype(object)))


def apply_forward(x, g: TestMove) -> np.ndarray:
    """``x - g`` on the component coordinates; may go negative."""
    y = np.array(x, dtype=np.int64)
    y[g.plus] -= 1
    if g.minus >= 0:
        y[g.minus] += 1
    return y


def apply_reverse(x, g: TestMove) -> np.ndarray:
    """``x + g`` on the component coordinates."""
    y = np.array(x, dtype=np.int64)
    y[g.plus] += 1
    if g.minus >= 0:
        y[g.minus] -= 1
    return y


def dump(moves, ninst: NormalizedInstance | None = None) -> str:
    """Text listing, one move per line, 1-based indices.

    With an instance the x-space delta is included as well.
    """
    lines = []
    for g in moves:
        line = g.describe()
        if ninst is not None:
            dx = g.x_delta(sum(ninst.k))
            line += " dx=" + ",".join(str(int(v)) for v in dx)
        lines.append(line)
    return "\n".join(lines) + ("\n" if lines else "")
