"""Precoder designs: the correlation-aware spectral design and three baselines.

The proposed design solves the power-constrained MSE problem without the
block-diagonal constraint in closed form (``A = V Phi U^T`` with water-filled
``|phi_j|^2``), zeroes the off-block entries and rescales to the power budget.
"""

from dataclasses import dataclass, replace

import numpy as np

from .exceptions import ContractError, DegeneratePrecoderError
from .model import block_diagonal_part, build_mask, build_Q
from .numerics import hermitian_eig, hpd_solve
from .receiver import mse_closed_form
from .waterfill import ModeSet, solve

__all__ = [
    "SpectralCache",
    "Precoder",
    "DESIGN_TAGS",
    "build_spectral_cache",
    "relaxed_allocation",
    "design_relaxed",
    "block_diagonalize",
    "transmit_power",
    "design_proposed",
    "design_ignoring_correlation",
    "design_comm_then_compute",
    "design_random",
    "design",
]

DESIGN_TAGS = ("proposed", "ignore_correlation", "comm_then_compute", "random")


@dataclass(frozen=True)
class SpectralCache:
    """Eigenstructure consumed by the relaxed design.

    ``K = U diag(deltas) U^T`` and ``H^H S^{-1} H = V diag(lambdas) V^H``;
    ``leverages[j]`` is the squared norm of column ``j`` of ``QU``.
    ``rank_limit`` is ``min(r, mK)``; lambdas past it are exactly zero.
    """

    U: np.ndarray
    deltas: np.ndarray
    V: np.ndarray
    lambdas: np.ndarray
    leverages: np.ndarray
    QU: np.ndarray
    rank_limit: int

    def modes(self, p0):
        return ModeSet(self.deltas, self.lambdas, self.leverages, p0, self.rank_limit)


@dataclass(frozen=True)
class Precoder:
    """Block-diagonal precoder ``A`` (``mK x nK``) and where it came from."""

    A: np.ndarray
    m: int
    n: int
    design_tag: str
    predicted_mse: float = float("nan")

    @property
    def K(self):
        return self.A.shape[0] // self.m

    @property
    def blocks(self):
        """Per-node ``m x n`` blocks ``A_k``."""
        m, n = self.m, self.n
        return [self.A[k * m:(k + 1) * m, k * n:(k + 1) * n] for k in range(self.K)]


def transmit_power(A, data_cov):
    """``trace(A K A^H)``, the expected total transmit power."""
    A = np.asarray(getattr(A, "A", A))
    return float(np.real(np.einsum("ij,jk,ik->", A, data_cov, A.conj())))


def build_spectral_cache(data_cov, channel, noise_cov, Q):
    K = np.asarray(data_cov, dtype=float)
    H = np.asarray(channel)
    Q = np.asarray(Q, dtype=float)
    r, mK = H.shape
    if K.shape != (Q.shape[1], Q.shape[1]):
        raise ContractError(f"data covariance {K.shape} does not match Q {Q.shape}")
    if np.shape(noise_cov) != (r, r):
        raise ContractError(f"noise covariance must be {(r, r)}, got {np.shape(noise_cov)}")
    data = hermitian_eig(K, name="data covariance")
    G = H.conj().T @ hpd_solve(noise_cov, H, name="noise covariance")
    chan = hermitian_eig(0.5 * (G + G.conj().T), name="H^H S^-1 H")
    rank_limit = min(r, mK)
    lambdas = chan.values.copy()
    lambdas[rank_limit:] = 0.0
    QU = Q @ data.vectors
    return SpectralCache(
        U=data.vectors,
        deltas=data.values,
        V=chan.vectors,
        lambdas=lambdas,
        leverages=np.sum(QU**2, axis=0),
        QU=QU,
        rank_limit=rank_limit,
    )


def relaxed_allocation(cache, p0):
    return solve(cache.modes(p0))


def design_relaxed(cache, p0, allocation=None):
    """Relaxed (not block-diagonal) optimum ``V Phi U^T``.

    ``Phi`` is the ``mK x nK`` rectangular diagonal with the nonnegative
    square roots of the water-filled powers.
    """
    if allocation is None:
        allocation = relaxed_allocation(cache, p0)
    d = min(cache.V.shape[0], cache.U.shape[0])
    phi = np.sqrt(allocation.phi_sq[:d])
    return (cache.V[:, :d] * phi) @ cache.U[:, :d].T


def block_diagonalize(A_tilde, mask, data_cov, p0, design_tag="proposed", m=None, n=None):
    """Zero the off-block entries of ``A_tilde`` and rescale to power ``p0``."""
    A_tilde = np.asarray(A_tilde)
    mask = np.asarray(mask)
    if A_tilde.shape != mask.shape:
        raise ContractError(f"precoder {A_tilde.shape} and mask {mask.shape} differ in shape")
    A_bd = mask * A_tilde
    power = transmit_power(A_bd, data_cov)
    if not power > 0:
        raise DegeneratePrecoderError("block-diagonal part of the precoder carries no power")
    if m is None or n is None:
        # infer block shape from the first block row of the mask
        m = int(np.argmin(mask[:, 0])) or mask.shape[0]
        n = int(np.count_nonzero(mask[0]))
    return Precoder(A=np.sqrt(p0 / power) * A_bd, m=m, n=n, design_tag=design_tag)


def _pipeline(config, design_cov, true_cov, noise_cov, H, leverage_Q, tag):
    cache = build_spectral_cache(design_cov, H, noise_cov, leverage_Q)
    A_tilde = design_relaxed(cache, config.p0)
    mask = build_mask(config.m, config.n, config.K)
    pre = block_diagonalize(A_tilde, mask, true_cov, config.p0, tag, config.m, config.n)
    return _with_prediction(pre, config, true_cov, noise_cov, H)


def _with_prediction(pre, config, data_cov, noise_cov, H):
    mse = mse_closed_form(pre.A, H, data_cov, noise_cov, build_Q(config.n, config.K))
    return replace(pre, predicted_mse=mse)


def design_proposed(config, data_cov, noise_cov, H):
    """Correlation-aware design: relaxed optimum, block mask, power rescale."""
    Q = build_Q(config.n, config.K)
    return _pipeline(config, data_cov, data_cov, noise_cov, H, Q, "proposed")


def design_ignoring_correlation(config, data_cov, noise_cov, H):
    """Same pipeline, but designed from the block-diagonal part of ``K``.

    Cross-node correlation is ignored only while designing; the power rescale
    and the predicted MSE use the true covariance.
    """
    K_bd = block_diagonal_part(data_cov, config.n, config.K)
    Q = build_Q(config.n, config.K)
    return _pipeline(config, K_bd, data_cov, noise_cov, H, Q, "ignore_correlation")


def design_comm_then_compute(config, data_cov, noise_cov, H):
    """Design for recovering all of ``x`` (identity target), then block-mask."""
    return _pipeline(config, data_cov, data_cov, noise_cov, H, np.eye(config.nK), "comm_then_compute")


def design_random(config, data_cov, rng_seed=None, noise_cov=None, H=None):
    """I.i.d. standard complex Gaussian blocks scaled to the power budget.

    ``rng_seed`` is anything :func:`numpy.random.default_rng` accepts. The
    predicted MSE is filled in when ``noise_cov`` and ``H`` are given.
    """
    rng = np.random.default_rng(rng_seed)
    m, n, K = config.m, config.n, config.K
    shape = (config.mK, config.nK)
    G = (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2.0)
    pre = block_diagonalize(G, build_mask(m, n, K), data_cov, config.p0, "random", m, n)
    if noise_cov is not None and H is not None:
        pre = _with_prediction(pre, config, data_cov, noise_cov, H)
    return pre


def design(tag, config, data_cov, noise_cov, H, rng=None):
    """Dispatch on a design tag from :data:`DESIGN_TAGS`."""
    if tag == "proposed":
        return design_proposed(config, data_cov, noise_cov, H)
    if tag == "ignore_correlation":
        return design_ignoring_correlation(config, data_cov, noise_cov, H)
    if tag == "comm_then_compute":
        return design_comm_then_compute(config, data_cov, noise_cov, H)
    if tag == "random":
        return design_random(config, data_cov, rng, noise_cov, H)
    raise ContractError(f"unknown design tag {tag!r}; expected one of {DESIGN_TAGS}")
