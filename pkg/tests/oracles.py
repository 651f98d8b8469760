"""Reference computations that do not share code paths with the package."""

import itertools

import numpy as np


def relaxed_objective(deltas, lambdas, R, p, L):
    d, lam, R, p = map(np.asarray, (deltas, lambdas, R, p))
    total = 0.0
    for j in range(len(d)):
        if j < L:
            total += d[j] * R[j] / (1.0 + d[j] * lam[j] * p[j])
        else:
            total += d[j] * R[j]
    return total


def _powers_at_level(d, lam, R, level, L):
    p = np.zeros(len(lam))
    for j in range(L):
        g = d[j] * lam[j] * R[j]
        if g > 0:
            p[j] = max(0.0, (np.sqrt(g) * level - 1.0) / (d[j] * lam[j]))
    return p


def waterlevel_oracle(deltas, lambdas, R, P0, L):
    """Grid on a log-spaced water level, then bisection on the spent power.

    The KKT powers ``(sqrt(g) * level - 1)^+ / (delta lambda)`` spend a budget
    that is nondecreasing in ``level``; the oracle finds the level that spends
    exactly ``P0`` without any active-set bookkeeping.
    """
    d, lam, R = (np.asarray(a, dtype=float) for a in (deltas, lambdas, R))
    L = min(L, len(d), len(lam))

    def spent(level):
        p = _powers_at_level(d, lam, R, level, L)
        return float(np.dot(d[:L], p[:L]))

    grid = np.logspace(-12, 12, 2401)
    spend = np.array([spent(v) for v in grid])
    hi_idx = int(np.argmax(spend >= P0))
    lo, hi = grid[max(hi_idx - 1, 0)], grid[hi_idx]
    for _ in range(400):
        mid = 0.5 * (lo + hi)
        if spent(mid) < P0:
            lo = mid
        else:
            hi = mid
        if hi - lo <= 1e-16 * hi:
            break
    p = _powers_at_level(d, lam, R, 0.5 * (lo + hi), L)
    return p, relaxed_objective(d, lam, R, p, L)


def subset_oracle(deltas, lambdas, R, P0, L):
    """Best objective over every active subset whose stationary point is feasible."""
    d, lam, R = (np.asarray(a, dtype=float) for a in (deltas, lambdas, R))
    L = min(L, len(d), len(lam))
    usable = [j for j in range(L) if d[j] * lam[j] * R[j] > 0]
    best = (None, np.inf)
    for size in range(1, len(usable) + 1):
        for subset in itertools.combinations(usable, size):
            s = list(subset)
            level = (P0 + np.sum(1 / lam[s])) / np.sum(np.sqrt(d[s] * R[s] / lam[s]))
            p = np.zeros(len(lam))
            p[s] = (np.sqrt(d[s] * lam[s] * R[s]) * level - 1) / (d[s] * lam[s])
            if np.any(p[s] < 0):
                continue
            f = relaxed_objective(d, lam, R, p, L)
            if f < best[1]:
                best = (p, f)
    return best


def simplex_grid_min(deltas, lambdas, R, P0, L, step=0.01):
    """Minimum objective over a grid of budget fractions (``q_j = delta_j p_j``)."""
    d, lam, R = (np.asarray(a, dtype=float) for a in (deltas, lambdas, R))
    L = min(L, len(d), len(lam))
    if L == 1:
        p = np.zeros(len(lam))
        p[0] = P0 / d[0]
        return relaxed_objective(d, lam, R, p, L)
    ticks = np.round(np.arange(0, 1 + step / 2, step), 12)
    best = np.inf
    for frac in itertools.product(ticks, repeat=L - 1):
        last = 1.0 - sum(frac)
        if last < -1e-12:
            continue
        q = np.array(list(frac) + [max(last, 0.0)]) * P0
        p = np.zeros(len(lam))
        p[:L] = q / d[:L]
        best = min(best, relaxed_objective(d, lam, R, p, L))
    return best


def theorem_closed_form(deltas, lambdas, R, P0, L):
    """All-active powers evaluated from the square-root closed form as written."""
    d, lam, R = (np.asarray(a, dtype=float) for a in (deltas, lambdas, R))
    num = P0 + sum(1.0 / lam[l] for l in range(L))
    den = sum(np.sqrt(d[l] * R[l] / lam[l]) for l in range(L))
    phi = [np.sqrt((np.sqrt(d[j] * lam[j] * R[j]) * num / den - 1.0) / (d[j] * lam[j])) for j in range(L)]
    return np.array(phi) ** 2


def random_spd(n, rng, cond_floor=0.1):
    G = rng.standard_normal((n, n))
    return G @ G.T / n + cond_floor * np.eye(n)


def random_hpd(n, rng, cond_floor=0.1):
    G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    return G @ G.conj().T / (2 * n) + cond_floor * np.eye(n)


def random_block_diag(m, n, K, rng):
    A = np.zeros((m * K, n * K), dtype=complex)
    for k in range(K):
        A[k * m:(k + 1) * m, k * n:(k + 1) * n] = rng.standard_normal((m, n)) + 1j * rng.standard_normal((m, n))
    return A


def random_modes(rng, max_modes=4):
    """Random (deltas, lambdas, R, P0, L) with at most ``max_modes`` modes."""
    nK = int(rng.integers(1, max_modes + 1))
    mK = int(rng.integers(1, max_modes + 1))
    r = int(rng.integers(1, max_modes + 1))
    L = min(r, mK)
    deltas = np.sort(rng.uniform(0.05, 5.0, nK))[::-1]
    lambdas = np.zeros(mK)
    lambdas[:L] = np.sort(rng.uniform(0.01, 20.0, L))[::-1]
    R = rng.uniform(0.0, 2.0, nK)
    P0 = float(rng.choice([0.01, 0.1, 1.0, 10.0]) * rng.uniform(0.5, 2.0))
    return deltas, lambdas, R, P0, L
