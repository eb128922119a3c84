"""Symmetric positive-definite matrix helpers for the scoring kernels.

Square roots and inverse square roots go through a symmetric
eigendecomposition.  Matrices with an eigenvalue below ``SPD_EIG_FLOOR``
are rejected outright instead of being regularized: a silent jitter would
shift every score by an uncontrolled amount and corrupt the close
comparisons the package exists to make.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NotSPDError

SPD_EIG_FLOOR = 1e-10


def as_cov_matrix(value, dim: int, name: str = "matrix") -> np.ndarray:
    """Coerce a scalar / flat list / matrix into a (dim, dim) SPD array.

    A scalar v means v * I.  A flat sequence of dim*dim entries is read
    row-major.  The result is symmetrized and validated.
    """
    arr = np.asarray(value, dtype=float)
    if arr.ndim == 0:
        mat = float(arr) * np.eye(dim)
    elif arr.ndim == 1:
        if arr.size == dim * dim:
            mat = arr.reshape(dim, dim)
        elif arr.size == dim:
            mat = np.diag(arr)
        else:
            raise DimensionError(
                f"{name}: expected scalar, {dim} diagonal entries, or "
                f"{dim * dim} row-major entries, got {arr.size}"
            )
    elif arr.shape == (dim, dim):
        mat = arr
    else:
        raise DimensionError(f"{name}: expected ({dim}, {dim}) matrix, got {arr.shape}")
    if not np.allclose(mat, mat.T, atol=1e-12):
        raise NotSPDError(f"{name} is not symmetric")
    mat = 0.5 * (mat + mat.T)
    check_spd(mat, name)
    return mat


def spd_eigh(mat: np.ndarray, name: str = "matrix"):
    """Eigendecomposition with the SPD floor enforced."""
    vals, vecs = np.linalg.eigh(mat)
    if vals.min() < SPD_EIG_FLOOR:
        raise NotSPDError(
            f"{name} has eigenvalue {vals.min():.3e} < {SPD_EIG_FLOOR:.0e}; "
            "refusing to proceed (no regularization by design)"
        )
    return vals, vecs


def check_spd(mat: np.ndarray, name: str = "matrix") -> None:
    spd_eigh(mat, name)


def spd_power(mat: np.ndarray, power: float, name: str = "matrix") -> np.ndarray:
    """mat**power for SPD mat via eigendecomposition (power may be negative)."""
    vals, vecs = spd_eigh(mat, name)
    return (vecs * vals**power) @ vecs.T


def logdet_spd(mat: np.ndarray, name: str = "matrix") -> float:
    vals, _ = spd_eigh(mat, name)
    return float(np.sum(np.log(vals)))
