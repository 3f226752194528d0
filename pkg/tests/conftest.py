import numpy as np
import pytest

from redalloc import Instance, reliability


def t1(R0=0.97):
    return Instance(r=[[0.9, 0.8]], c=[[5, 3]], u=[[2, 2]], R0=R0)


@pytest.fixture
def T1():
    return t1()


def random_small(seed, nmax=4, kmax=3, umax=3, rlo=0.6, rhi=0.99, cmax=20, umin=1, frac=0.9):
    """Random instance with R0 a fixed fraction of the best reachable reliability."""
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, nmax + 1))
    k = rng.integers(1, kmax + 1, size=n)
    r = [[float(v) for v in rng.uniform(rlo, rhi, size=ki)] for ki in k]
    c = [[int(v) for v in rng.integers(1, cmax + 1, size=ki)] for ki in k]
    u = [[int(v) for v in rng.integers(umin, umax + 1, size=ki)] for ki in k]
    top = reliability(Instance(r=r, c=c, u=u, R0=0.0), u)
    return Instance(r=r, c=c, u=u, R0=frac * top)


def direct_reliability(inst, x):
    """Plain power-product evaluation, no logs."""
    out = 1.0
    for rrow, lrow, xrow in zip(inst.r, inst.l, x):
        q = 1.0
        for rv, xv in zip(rrow, xrow):
            q *= (1.0 - rv) ** xv
        out *= 1.0 - q
    return out


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
