"""Hot numeric kernels, in a numba flavour and a pure-numpy flavour.

Every kernel works on the flat layout of an instance: component ``j`` of
subsystem ``i`` lives at flat position ``starts[i] + j``. Arrays:

    log1m     float64[N]  ln(1 - r) per component
    base_log  float64[n]  log-unreliability carried by fixed lower bounds
    starts    int64[n+1]  subsystem offsets into the flat vector
    sub       int64[N]    subsystem of each flat position
    cost      int64[N]
    upper     int64[N]
    demand    int64[n]    minimum number of units per subsystem

Both flavours evaluate reliability in the same operation order (sum over
components in index order, ``-expm1`` per subsystem, product over subsystems
in index order), so a backend never disagrees with itself about whether a
point clears the reliability floor.

The active flavour is exported under the unsuffixed names; both remain
reachable as ``*_nb`` / ``*_np`` for tests and benchmarks.
"""
import numpy as np

from ._accel import USE_NUMBA, njit

# ---------------------------------------------------------------------------
# numba flavour
# ---------------------------------------------------------------------------


@njit(cache=True, nogil=True)
def _subsystem_factor_nb(x, i, log1m, base_log, starts):
    s = base_log[i]
    for j in range(starts[i], starts[i + 1]):
        s += x[j] * log1m[j]
    return -np.expm1(s)


@njit(cache=True, nogil=True)
def reliability_one_nb(x, log1m, base_log, starts):
    n = starts.shape[0] - 1
    r = 1.0
    for i in range(n):
        r *= _subsystem_factor_nb(x, i, log1m, base_log, starts)
    return r


@njit(cache=True, nogil=True)
def reliability_batch_nb(X, log1m, base_log, starts):
    out = np.empty(X.shape[0])
    for b in range(X.shape[0]):
        out[b] = reliability_one_nb(X[b], log1m, base_log, starts)
    return out


@njit(cache=True, nogil=True)
def expand_nb(x, x_cost, plus, minus, upper, cost, sub, starts, demand, budget, log1m, base_log):
    """Apply every reverse move to ``x``; report feasibility, cost, reliability."""
    n = starts.shape[0] - 1
    m = plus.shape[0]
    nvar = x.shape[0]
    factors = np.empty(n)
    for i in range(n):
        factors[i] = _subsystem_factor_nb(x, i, log1m, base_log, starts)

    children = np.empty((m, nvar), dtype=np.int64)
    ok = np.zeros(m, dtype=np.bool_)
    rel = np.zeros(m)
    ccost = np.empty(m, dtype=np.int64)
    for g in range(m):
        child = children[g]
        for j in range(nvar):
            child[j] = x[j]
        p = plus[g]
        q = minus[g]
        child[p] += 1
        c = x_cost + cost[p]
        if q >= 0:
            child[q] -= 1
            c -= cost[q]
        ccost[g] = c
        if child[p] > upper[p] or c > budget:
            continue
        i = sub[p]
        if q >= 0:
            if child[q] < 0:
                continue
            total = 0
            for j in range(starts[i], starts[i + 1]):
                total += child[j]
            if total < demand[i]:
                continue
        ok[g] = True
        fi = _subsystem_factor_nb(child, i, log1m, base_log, starts)
        r = 1.0
        for h in range(n):
            if h == i:
                r *= fi
            else:
                r *= factors[h]
        rel[g] = r
    return children, ok, rel, ccost


@njit(cache=True, nogil=True)
def greedy_descent_nb(y, order, sub, starts, demand, r0, log1m, base_log):
    """Strip units from ``y`` in ``order`` while it stays reliable and non-empty."""
    n = starts.shape[0] - 1
    factors = np.empty(n)
    for i in range(n):
        factors[i] = _subsystem_factor_nb(y, i, log1m, base_log, starts)
    for idx in range(order.shape[0]):
        j = order[idx]
        i = sub[j]
        reliable = True
        nonempty = True
        while reliable and nonempty and y[j] > 0:
            y[j] -= 1
            total = 0
            for h in range(starts[i], starts[i + 1]):
                total += y[h]
            if total < demand[i]:
                nonempty = False
            fi = _subsystem_factor_nb(y, i, log1m, base_log, starts)
            r = 1.0
            for h in range(n):
                if h == i:
                    r *= fi
                else:
                    r *= factors[h]
            if r < r0:
                reliable = False
            if not reliable or not nonempty:
                y[j] += 1
            else:
                factors[i] = fi
    return y


@njit(cache=True, nogil=True)
def enumerate_min_nb(lower, upper, cost, starts, demand, r0, log1m, base_log):
    """Row-major walk over the box ``lower <= x <= upper``.

    Returns (best_x, best_cost, n_feasible); best_cost is -1 when nothing
    qualifies. Row-major order is lex-ascending, so the first point at a
    given cost is the lex-smallest one.
    """
    nvar = lower.shape[0]
    n = starts.shape[0] - 1
    x = lower.copy()
    best = lower.copy()
    best_cost = -1
    count = 0
    c = 0
    for j in range(nvar):
        c += cost[j] * x[j]
    while True:
        valid = True
        for i in range(n):
            total = 0
            for j in range(starts[i], starts[i + 1]):
                total += x[j]
            if total < demand[i]:
                valid = False
                break
        if valid and reliability_one_nb(x, log1m, base_log, starts) >= r0:
            count += 1
            if best_cost < 0 or c < best_cost:
                best_cost = c
                for j in range(nvar):
                    best[j] = x[j]
        # odometer step, last coordinate fastest
        pos = nvar - 1
        while pos >= 0 and x[pos] == upper[pos]:
            c -= cost[pos] * (x[pos] - lower[pos])
            x[pos] = lower[pos]
            pos -= 1
        if pos < 0:
            break
        x[pos] += 1
        c += cost[pos]
    return best, best_cost, count


# ---------------------------------------------------------------------------
# numpy flavour
# ---------------------------------------------------------------------------


def _factors_np(X, log1m, base_log, starts):
    # column loop keeps the summation order identical to the numba kernel
    n = starts.shape[0] - 1
    Xf = X.astype(np.float64)
    logq = np.empty((X.shape[0], n))
    for i in range(n):
        s = np.full(X.shape[0], base_log[i])
        for j in range(starts[i], starts[i + 1]):
            s = s + Xf[:, j] * log1m[j]
        logq[:, i] = s
    return -np.expm1(logq)


def _product_np(F):
    r = np.ones(F.shape[0])
    for i in range(F.shape[1]):
        r = r * F[:, i]
    return r


def reliability_batch_np(X, log1m, base_log, starts):
    X = np.atleast_2d(X)
    return _product_np(_factors_np(X, log1m, base_log, starts))


def reliability_one_np(x, log1m, base_log, starts):
    return float(reliability_batch_np(x[None, :], log1m, base_log, starts)[0])


def expand_np(x, x_cost, plus, minus, upper, cost, sub, starts, demand, budget, log1m, base_log):
    m = plus.shape[0]
    rows = np.arange(m)
    children = np.repeat(x[None, :], m, axis=0)
    children[rows, plus] += 1
    has_minus = minus >= 0
    children[rows[has_minus], minus[has_minus]] -= 1
    ccost = x_cost + cost[plus] - np.where(has_minus, cost[np.maximum(minus, 0)], 0)

    ok = (children >= 0).all(axis=1) & (children <= upper).all(axis=1) & (ccost <= budget)
    sums = np.add.reduceat(children, starts[:-1], axis=1)
    ok &= (sums >= demand).all(axis=1)
    rel = np.zeros(m)
    if ok.any():
        rel[ok] = reliability_batch_np(children[ok], log1m, base_log, starts)
    return children, ok, rel, ccost


def greedy_descent_np(y, order, sub, starts, demand, r0, log1m, base_log):
    for j in order:
        i = sub[j]
        seg = slice(starts[i], starts[i + 1])
        reliable = True
        nonempty = True
        while reliable and nonempty and y[j] > 0:
            y[j] -= 1
            if y[seg].sum() < demand[i]:
                nonempty = False
            if reliability_one_np(y, log1m, base_log, starts) < r0:
                reliable = False
            if not reliable or not nonempty:
                y[j] += 1
    return y


def enumerate_min_np(lower, upper, cost, starts, demand, r0, log1m, base_log, chunk=1 << 16):
    radix = upper - lower + 1
    total = int(np.prod(radix))
    # place values for a row-major (last coordinate fastest) decode
    place = np.ones_like(radix)
    for j in range(len(radix) - 2, -1, -1):
        place[j] = place[j + 1] * radix[j + 1]
    best = lower.copy()
    best_cost = -1
    count = 0
    for lo in range(0, total, chunk):
        idx = np.arange(lo, min(lo + chunk, total), dtype=np.int64)
        X = lower + (idx[:, None] // place) % radix
        sums = np.add.reduceat(X, starts[:-1], axis=1)
        mask = (sums >= demand).all(axis=1)
        if not mask.any():
            continue
        X = X[mask]
        mask = reliability_batch_np(X, log1m, base_log, starts) >= r0
        if not mask.any():
            continue
        X = X[mask]
        count += X.shape[0]
        c = X @ cost
        k = int(np.argmin(c))  # first minimum is lex-smallest within the chunk
        if best_cost < 0 or c[k] < best_cost:
            best_cost = int(c[k])
            best = X[k].copy()
    return best, best_cost, count


if USE_NUMBA:
    reliability_one = reliability_one_nb
    reliability_batch = reliability_batch_nb
    expand = expand_nb
    greedy_descent = greedy_descent_nb
    enumerate_min = enumerate_min_nb
else:
    reliability_one = reliability_one_np
    reliability_batch = reliability_batch_np
    expand = expand_np
    greedy_descent = greedy_descent_np
    enumerate_min = enumerate_min_np
