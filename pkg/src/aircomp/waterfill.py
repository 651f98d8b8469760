"""Power allocation over paired data/channel eigenmodes.

Mode ``j`` couples the ``j``-th largest data eigenvalue ``delta_j``, the
``j``-th largest channel gain ``lambda_j`` and the leverage ``R_j`` of the data
eigenvector on the aggregation target. Allocating ``p_j = |phi_j|^2`` to it
costs ``delta_j * p_j`` of the budget and reduces the error term
``delta_j R_j / (1 + delta_j lambda_j p_j)``.
"""

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError, NoUsableModeError

__all__ = ["ModeSet", "Allocation", "solve", "objective", "all_active_allocation"]


@dataclass(frozen=True)
class ModeSet:
    """Inputs of the allocation problem.

    ``active_limit`` is the number of leading modes that can carry power,
    normally ``min(r, mK)``; it is further capped by the lengths of
    ``deltas`` and ``lambdas``.
    """

    deltas: np.ndarray
    lambdas: np.ndarray
    leverages: np.ndarray
    budget: float
    active_limit: int

    def __post_init__(self):
        deltas = np.asarray(self.deltas, dtype=float)
        lambdas = np.asarray(self.lambdas, dtype=float)
        leverages = np.asarray(self.leverages, dtype=float)
        if deltas.ndim != 1 or lambdas.ndim != 1 or leverages.shape != deltas.shape:
            raise ContractError("deltas and leverages must be vectors of equal length; lambdas a vector")
        if np.any(deltas < 0) or np.any(lambdas < 0) or np.any(leverages < 0):
            raise ContractError("deltas, lambdas and leverages must be nonnegative")
        if np.any(np.diff(deltas) > 0) or np.any(np.diff(lambdas) > 0):
            raise ContractError("deltas and lambdas must be sorted non-increasing")
        if not self.budget > 0:
            raise ContractError(f"budget must be positive, got {self.budget}")
        if self.active_limit < 0:
            raise ContractError("active_limit must be >= 0")
        object.__setattr__(self, "deltas", deltas)
        object.__setattr__(self, "lambdas", lambdas)
        object.__setattr__(self, "leverages", leverages)
        object.__setattr__(self, "budget", float(self.budget))

    @property
    def limit(self):
        """Effective number of modes that may be active."""
        return int(min(self.active_limit, self.deltas.size, self.lambdas.size))

    def gains(self):
        """``delta_j * lambda_j * R_j`` for the first :attr:`limit` modes."""
        L = self.limit
        return self.deltas[:L] * self.lambdas[:L] * self.leverages[:L]


@dataclass(frozen=True)
class Allocation:
    phi_sq: np.ndarray
    multiplier: float

    @property
    def active_set(self):
        return np.flatnonzero(self.phi_sq > 0)


def objective(modes, phi_sq):
    """Relaxed MSE as a function of the per-mode powers.

    ``sum_{j<L} delta_j R_j / (1 + delta_j lambda_j p_j) + sum_{j>=L} delta_j R_j``
    where ``L = modes.limit`` and the second sum runs to ``len(deltas)``.
    """
    p = np.asarray(phi_sq, dtype=float)
    if np.any(p < 0):
        raise ContractError("phi_sq must be nonnegative")
    L = modes.limit
    d, lam, R = modes.deltas, modes.lambdas, modes.leverages
    head = d[:L] * R[:L] / (1.0 + d[:L] * lam[:L] * p[:L])
    return float(np.sum(head) + np.sum(d[L:] * R[L:]))


def _level(modes, idx):
    """``1/sqrt(mu)`` that spends the whole budget on modes ``idx``."""
    d, lam, R = modes.deltas[idx], modes.lambdas[idx], modes.leverages[idx]
    return (modes.budget + np.sum(1.0 / lam)) / np.sum(np.sqrt(d * R / lam))


def _candidates(modes, idx, level):
    d, lam, R = modes.deltas[idx], modes.lambdas[idx], modes.leverages[idx]
    return (np.sqrt(d * lam * R) * level - 1.0) / (d * lam)


def all_active_allocation(modes):
    """Closed-form powers assuming every mode ``j < limit`` is active.

    Entries may come out negative; that signals the closed form does not
    apply and :func:`solve` falls back to water-filling.
    """
    L = modes.limit
    idx = np.arange(L)
    p = np.zeros(modes.lambdas.size)
    p[:L] = _candidates(modes, idx, _level(modes, idx))
    return p


def solve(modes):
    """Optimal powers under ``sum_j delta_j p_j = budget``.

    The all-active closed form is tried first. If some mode gets a negative
    power, every such mode is dropped and the water level is recomputed on the
    survivors until all are nonnegative. Modes with zero gain
    ``delta_j lambda_j R_j`` never receive power.

    Returns
    -------
    Allocation
        ``phi_sq`` has length ``len(lambdas)``; ``multiplier`` is the Lagrange
        multiplier ``mu`` of the power constraint.
    """
    gains = modes.gains()
    active = np.flatnonzero(gains > 0)
    if active.size == 0:
        raise NoUsableModeError("no mode has a positive delta * lambda * R product")
    for _ in range(active.size):
        level = _level(modes, active)
        cand = _candidates(modes, active, level)
        negative = cand < 0
        if not negative.any():
            break
        active = active[~negative]
    else:  # pragma: no cover - the active set shrinks every round
        raise RuntimeError("water-filling did not converge")
    phi_sq = np.zeros(modes.lambdas.size)
    phi_sq[active] = cand
    return Allocation(phi_sq=phi_sq, multiplier=float(1.0 / level**2))
