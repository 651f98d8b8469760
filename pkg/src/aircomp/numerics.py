"""Dense Hermitian linear-algebra kernels.

Thin, contract-checked wrappers around LAPACK (via numpy/scipy). Every
function is pure; nothing here keeps state between calls.
"""

from dataclasses import dataclass

import numpy as np
from scipy import linalg as sla

from .exceptions import ContractError, SingularMatrixError

__all__ = [
    "EigenPair",
    "hermitian_eig",
    "hpd_solve",
    "cholesky_lower",
    "is_hermitian",
    "rel_fro_error",
]

HERMITIAN_TOL = 1e-10
# negative eigenvalues within this fraction of the largest one are round-off
PSD_CLAMP = 1e-12


@dataclass(frozen=True)
class EigenPair:
    """Eigenvalues sorted non-increasing and the matching eigenvector columns."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self):
        return (self.vectors * self.values) @ self.vectors.conj().T


def _as_square(matrix, name):
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ContractError(f"{name} must be a square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ContractError(f"{name} has non-finite entries")
    return a


def is_hermitian(matrix, tol=HERMITIAN_TOL):
    """True if ``matrix`` equals its conjugate transpose up to ``tol`` (relative)."""
    a = np.asarray(matrix)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        return False
    scale = max(1.0, float(np.max(np.abs(a), initial=0.0)))
    return float(np.max(np.abs(a - a.conj().T), initial=0.0)) <= tol * scale


def rel_fro_error(approx, exact):
    """Relative Frobenius distance ``||approx - exact|| / max(||exact||, 1e-300)``."""
    exact = np.asarray(exact)
    return float(np.linalg.norm(np.asarray(approx) - exact) / max(np.linalg.norm(exact), 1e-300))


def _fix_phase(vectors):
    # Make the largest-magnitude entry of each column real and positive so the
    # decomposition is reproducible for identical inputs.
    idx = np.argmax(np.abs(vectors), axis=0)
    pivots = vectors[idx, np.arange(vectors.shape[1])]
    phase = pivots / np.abs(pivots)
    return vectors * phase.conj()


def hermitian_eig(matrix, name="matrix"):
    """Eigendecomposition of a Hermitian (or real symmetric) matrix.

    Parameters
    ----------
    matrix : (N, N) array_like
        Hermitian complex or symmetric real matrix.
    name : str
        Used in error messages.

    Returns
    -------
    EigenPair
        Values sorted in non-increasing order. Round-off negatives no larger
        than ``1e-12`` times the largest magnitude eigenvalue are set to zero.
        Each eigenvector is normalized so its largest-magnitude entry is real
        positive. Real input gives real eigenvectors.
    """
    a = _as_square(matrix, name)
    if not is_hermitian(a):
        raise ContractError(f"{name} is not Hermitian within {HERMITIAN_TOL:g}")
    a = 0.5 * (a + a.conj().T)
    values, vectors = np.linalg.eigh(a)
    values = values[::-1].copy()
    vectors = _fix_phase(vectors[:, ::-1])
    if values.size:
        top = np.max(np.abs(values))
        values[(values < 0) & (values > -PSD_CLAMP * top)] = 0.0
    return EigenPair(values=values, vectors=vectors)


def cholesky_lower(matrix, name="matrix"):
    """Lower Cholesky factor ``L`` with ``L @ L^H == matrix``."""
    a = _as_square(matrix, name)
    if not is_hermitian(a):
        raise ContractError(f"{name} is not Hermitian within {HERMITIAN_TOL:g}")
    try:
        return np.linalg.cholesky(a)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(name, str(exc)) from exc


def hpd_solve(lhs, rhs, name="lhs"):
    """Solve ``lhs @ X = rhs`` for Hermitian positive definite ``lhs``.

    Uses a Cholesky factorization; never forms an explicit inverse.
    Raises :class:`SingularMatrixError` naming ``name`` when ``lhs`` is not PD.
    """
    a = _as_square(lhs, name)
    b = np.asarray(rhs)
    if b.shape[0] != a.shape[0]:
        raise ContractError(f"{name} is {a.shape} but right-hand side has {b.shape[0]} rows")
    try:
        factor = sla.cho_factor(a, lower=True, check_finite=False)
    except np.linalg.LinAlgError as exc:
        raise SingularMatrixError(name, str(exc)) from exc
    return sla.cho_solve(factor, b, check_finite=False)
