"""Dense complex-matrix helpers: tensor products and Hermitian spectra.

Every operator in this package is a small dense ``complex128`` matrix, so
numpy's eigensolver is used directly; what this module adds are the explicit
tolerance checks and the descending eigenvalue convention the verification
analysis relies on.
"""
from __future__ import annotations

import numpy as np

from .errors import NonHermitianError, OutOfRangeError

HERMITIAN_ATOL = 1e-10
MAX_EIG_DIM = 4096


def as_matrix(a) -> np.ndarray:
    """Coerce to a 2-D complex128 array."""
    m = np.asarray(a, dtype=complex)
    if m.ndim != 2:
        raise OutOfRangeError(f"expected a 2-D matrix, got array of shape {m.shape}")
    return m


def kron(a, b) -> np.ndarray:
    """Tensor (Kronecker) product of two matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def dagger(a) -> np.ndarray:
    return np.conj(np.asarray(a)).T


def hermiticity_defect(h) -> float:
    """max-norm of H - H^dagger."""
    h = as_matrix(h)
    if h.shape[0] != h.shape[1]:
        return float("inf")
    return float(np.abs(h - dagger(h)).max())


def require_hermitian(h, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    h = as_matrix(h)
    defect = hermiticity_defect(h)
    if defect > atol:
        raise NonHermitianError(
            f"max |H - H^dagger| = {defect:.3e} exceeds tolerance {atol:.1e}"
        )
    return h


def eig_hermitian(h) -> tuple[np.ndarray, np.ndarray]:
    """Full eigendecomposition of a Hermitian matrix.

    Returns ``(w, v)`` with eigenvalues ``w`` sorted in descending order
    (multiplicities repeated) and ``v[:, i]`` the orthonormal eigenvector for
    ``w[i]``.  No eigenvector convention is promised inside a degenerate
    eigenspace.
    """
    h = require_hermitian(h)
    if h.shape[0] > MAX_EIG_DIM:
        raise OutOfRangeError(
            f"matrix dimension {h.shape[0]} exceeds supported maximum {MAX_EIG_DIM}"
        )
    w, v = np.linalg.eigh(h)
    return w[::-1].copy(), v[:, ::-1].copy()


def second_eigenvalue(h) -> float:
    """Second-largest eigenvalue, counted with multiplicity."""
    w, _ = eig_hermitian(h)
    if w.size < 2:
        raise OutOfRangeError("need at least a 2x2 matrix for a second eigenvalue")
    return float(w[1])
