"""LMMSE aggregation receiver and the two equivalent MSE evaluations."""

from dataclasses import dataclass

import numpy as np

from .exceptions import ContractError
from .numerics import hpd_solve

__all__ = ["LmmseReceiver", "lmmse_matrix", "estimate", "mse_closed_form", "mse_direct", "mse_with"]

# tolerated imaginary residue of a trace that is real in exact arithmetic
IMAG_TOL = 1e-10


@dataclass(frozen=True)
class LmmseReceiver:
    W: np.ndarray

    @property
    def target_dim(self):
        return self.W.shape[0]


def _matrix(A):
    # accept a Precoder or a bare array
    return np.asarray(getattr(A, "A", A))


def _forward(A, H):
    A, H = _matrix(A), np.asarray(H)
    if H.shape[1] != A.shape[0]:
        raise ContractError(f"channel {H.shape} does not match precoder {A.shape}")
    return H @ A


def lmmse_matrix(A, H, data_cov, noise_cov, Q):
    """``W = Q K B^H (B K B^H + S)^{-1}`` with ``B = H A``.

    Computed as the conjugate transpose of a Cholesky solve; the bracketed
    matrix is Hermitian PD whenever ``S`` is.
    """
    B = _forward(A, H)
    K = np.asarray(data_cov)
    C = B @ K @ B.conj().T + noise_cov
    C = 0.5 * (C + C.conj().T)
    W = hpd_solve(C, B @ K @ np.asarray(Q).T, name="H A K A^H H^H + S").conj().T
    return LmmseReceiver(W=W)


def estimate(receiver, y):
    """``s_hat = W y``; ``y`` may be a vector or a matrix of column observations."""
    y = np.asarray(y)
    if y.shape[0] != receiver.W.shape[1]:
        raise ContractError(f"y has {y.shape[0]} entries, receiver expects {receiver.W.shape[1]}")
    return receiver.W @ y


def _real_trace(M, what):
    t = np.trace(M)
    if abs(np.imag(t)) > IMAG_TOL * max(1.0, abs(np.real(t))):
        raise ArithmeticError(f"{what} has imaginary part {np.imag(t):.3e}")
    return float(np.real(t))


def mse_closed_form(A, H, data_cov, noise_cov, Q):
    """``trace(Q (K^{-1} + B^H S^{-1} B)^{-1} Q^T)`` with ``B = H A``."""
    B = _forward(A, H)
    K = np.asarray(data_cov)
    Q = np.asarray(Q)
    K_inv = hpd_solve(K, np.eye(K.shape[0]), name="data covariance")
    J = K_inv + B.conj().T @ hpd_solve(noise_cov, B, name="noise covariance")
    J = 0.5 * (J + J.conj().T)
    X = hpd_solve(J, Q.T.astype(J.dtype), name="K^-1 + A^H H^H S^-1 H A")
    return _real_trace(Q @ X, "closed-form MSE")


def mse_with(W, A, H, data_cov, noise_cov, Q):
    """MSE ``E||W y - Q x||^2`` of an arbitrary linear receiver ``W``."""
    B = _forward(A, H)
    E = np.asarray(W) @ B - np.asarray(Q)
    value = _real_trace(E @ data_cov @ E.conj().T, "distortion term")
    return value + _real_trace(W @ noise_cov @ np.asarray(W).conj().T, "noise term")


def mse_direct(A, H, data_cov, noise_cov, Q):
    """Expected squared error of the LMMSE receiver expanded term by term."""
    W = lmmse_matrix(A, H, data_cov, noise_cov, Q).W
    return mse_with(W, A, H, data_cov, noise_cov, Q)
