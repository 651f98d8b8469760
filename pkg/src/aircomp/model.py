"""System configuration and the deterministic matrices of the AirComp model.

A network of ``K`` sensor nodes, each holding ``n`` pre-processed values and
``m`` transmit antennas, sends ``y = H A x + noise`` to an aggregator with
``r`` receive antennas. The aggregator wants ``s = Q x``, the elementwise sum
of the per-node vectors.
"""

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy.linalg import toeplitz

from .exceptions import ContractError

__all__ = [
    "SystemConfig",
    "CovariancePair",
    "NomographicSpec",
    "build_exponential_covariance",
    "build_data_covariance",
    "build_noise_covariance",
    "build_covariances",
    "build_Q",
    "build_mask",
    "block_diagonal_part",
    "apply_nomographic",
]


@dataclass(frozen=True)
class SystemConfig:
    """Dimensions, power budget and correlation parameters of one setup.

    Attributes
    ----------
    n : int
        Measurements per node.
    m : int
        Transmit antennas per node.
    r : int
        Receive antennas at the aggregator.
    K : int
        Number of sensor nodes.
    p0 : float
        Total transmit power ``E||A x||^2``.
    snr_db : float
        ``10 log10(p0 / trace(S))``.
    rho_data, rho_noise : float
        Exponential correlation bases for the data and noise covariances.
    """

    n: int = 8
    m: int = 2
    r: int = 16
    K: int = 30
    p0: float = 10.0
    snr_db: float = 25.0
    rho_data: float = 0.8
    rho_noise: float = 0.5

    def __post_init__(self):
        for name in ("n", "m", "r", "K"):
            value = getattr(self, name)
            if isinstance(value, bool) or int(value) != value or value < 1:
                raise ContractError(f"{name} must be an integer >= 1, got {value!r}")
            object.__setattr__(self, name, int(value))
        if not (np.isfinite(self.p0) and self.p0 > 0):
            raise ContractError(f"p0 must be positive, got {self.p0!r}")
        if not np.isfinite(self.snr_db):
            raise ContractError(f"snr_db must be finite, got {self.snr_db!r}")
        for name in ("rho_data", "rho_noise"):
            rho = getattr(self, name)
            if not 0.0 <= rho < 1.0:
                raise ContractError(f"{name} must lie in [0, 1), got {rho!r}")
        object.__setattr__(self, "p0", float(self.p0))
        object.__setattr__(self, "snr_db", float(self.snr_db))

    @property
    def nK(self):
        return self.n * self.K

    @property
    def mK(self):
        return self.m * self.K

    @property
    def noise_power(self):
        """Trace of the noise covariance implied by ``p0`` and ``snr_db``."""
        return self.p0 / 10.0 ** (self.snr_db / 10.0)


@dataclass(frozen=True)
class CovariancePair:
    data_cov: np.ndarray
    noise_cov: np.ndarray


def build_exponential_covariance(size, rho, scale=1.0):
    """Matrix with entries ``scale * rho**|i - j|``."""
    if size < 1:
        raise ContractError(f"size must be >= 1, got {size}")
    if not 0.0 <= rho < 1.0:
        raise ContractError(f"rho must lie in [0, 1), got {rho}")
    if not scale > 0:
        raise ContractError(f"scale must be positive, got {scale}")
    # 0.0 ** 0 == 1 keeps the diagonal at ``scale`` when rho == 0
    return scale * toeplitz(float(rho) ** np.arange(size))


def build_data_covariance(config):
    """Data covariance ``K`` of the stacked vector ``x`` (real, ``nK x nK``)."""
    return build_exponential_covariance(config.nK, config.rho_data)


def build_noise_covariance(config):
    """Noise covariance ``S`` (complex, ``r x r``).

    The correlation shape is ``rho_noise**|a - b| / r`` (unit trace); it is
    rescaled so that ``10 log10(p0 / trace(S))`` equals ``config.snr_db``.
    """
    shape = build_exponential_covariance(config.r, config.rho_noise, 1.0 / config.r)
    return (config.noise_power * shape).astype(complex)


def build_covariances(config):
    return CovariancePair(build_data_covariance(config), build_noise_covariance(config))


def build_Q(n, K):
    """Summation matrix ``[I_n, ..., I_n]`` of shape ``n x nK``."""
    if n < 1 or K < 1:
        raise ContractError(f"n and K must be >= 1, got n={n}, K={K}")
    return np.tile(np.eye(n), (1, K))


def build_mask(m, n, K):
    """Block-diagonal 0/1 mask with ``K`` all-ones ``m x n`` diagonal blocks."""
    if min(m, n, K) < 1:
        raise ContractError(f"m, n, K must be >= 1, got {(m, n, K)}")
    return np.kron(np.eye(K), np.ones((m, n)))


def block_diagonal_part(matrix, block, K):
    """Keep only the ``K`` diagonal ``block x block`` blocks of a square matrix."""
    return np.asarray(matrix) * build_mask(block, block, K)


@dataclass
class NomographicSpec:
    """Pre-processing functions ``phi[k][l]`` and post-processing ``psi[l]``.

    A nomographic function of the node measurements is
    ``f_l(d_1l, ..., d_Kl) = psi_l(sum_k phi_kl(d_kl))``.
    """

    pre: Sequence[Sequence[Callable[[float], float]]]
    post: Sequence[Callable[[float], float]]
    K: int = field(init=False)
    n: int = field(init=False)

    def __post_init__(self):
        self.K = len(self.pre)
        self.n = len(self.post)
        if self.K < 1 or self.n < 1:
            raise ContractError("nomographic spec needs at least one node and one element")
        if any(len(row) != self.n for row in self.pre):
            raise ContractError("every node needs exactly one pre-processing function per element")

    @classmethod
    def weighted_sum(cls, weights):
        """Spec for ``sum_k w[k, l] * d[k, l]``."""
        w = np.asarray(weights, dtype=float)
        if w.ndim != 2:
            raise ContractError("weights must be a K x n array")
        pre = [[(lambda c: (lambda chi: c * chi))(float(c)) for c in row] for row in w]
        return cls(pre=pre, post=[lambda chi: chi] * w.shape[1])

    @classmethod
    def identity(cls, K, n):
        return cls.weighted_sum(np.ones((K, n)))

    def preprocess(self, measurements):
        """Per-node vectors ``x_k`` as a ``K x n`` array."""
        d = np.asarray(measurements, dtype=float)
        if d.shape != (self.K, self.n):
            raise ContractError(f"measurements must have shape {(self.K, self.n)}, got {d.shape}")
        return np.array([[self.pre[k][l](d[k, l]) for l in range(self.n)] for k in range(self.K)])


def apply_nomographic(spec, measurements, aggregate=None):
    """Apply the post-processing functions to an aggregated sum.

    Parameters
    ----------
    spec : NomographicSpec
    measurements : (K, n) array_like
        Raw node measurements; only used when ``aggregate`` is None (and for
        shape checking otherwise).
    aggregate : (n,) array_like, optional
        Estimated elementwise sum of pre-processed values, e.g. the receiver
        output. Defaults to the exact sum.
    """
    d = np.asarray(measurements, dtype=float)
    if d.shape != (spec.K, spec.n):
        raise ContractError(f"measurements must have shape {(spec.K, spec.n)}, got {d.shape}")
    if aggregate is None:
        aggregate = spec.preprocess(d).sum(axis=0)
    agg = np.asarray(aggregate)
    if agg.shape != (spec.n,):
        raise ContractError(f"aggregate must have length {spec.n}, got shape {agg.shape}")
    return np.array([spec.post[l](agg[l]) for l in range(spec.n)])
