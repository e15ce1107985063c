"""Dense linear-algebra kernels.

All matrices here are small (a few hundred rows at most), so every routine
works from a full singular value decomposition and favors accuracy over speed.
"""

import numpy as np
from numpy.typing import ArrayLike, NDArray

from ..core.exceptions import DimensionMismatchError, ZeroMatrixError

DenseMatrix = NDArray[np.float64]
DenseVector = NDArray[np.float64]

EPS = float(np.finfo(np.float64).eps)


def as_matrix(data: ArrayLike, name: str = "matrix") -> DenseMatrix:
    """Coerce input to a 2-D float64 array.

    Raises:
        DimensionMismatchError: If the input is not two-dimensional.
    """
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 2:
        raise DimensionMismatchError(name, "2-D array", f"{arr.ndim}-D array")
    return arr


def as_vector(data: ArrayLike, name: str = "vector") -> DenseVector:
    """Coerce input to a 1-D float64 array.

    Raises:
        DimensionMismatchError: If the input is not one-dimensional.
    """
    arr = np.asarray(data, dtype=np.float64)
    if arr.ndim != 1:
        raise DimensionMismatchError(name, "1-D array", f"{arr.ndim}-D array")
    return arr


def matvec(m: ArrayLike, v: ArrayLike) -> DenseVector:
    """Dense matrix-vector product.

    Args:
        m: Matrix of shape (rows, cols).
        v: Vector of length cols.

    Returns:
        Vector of length rows.

    Raises:
        DimensionMismatchError: If cols does not match the vector length.
    """
    mat = as_matrix(m)
    vec = as_vector(v)
    if mat.shape[1] != vec.shape[0]:
        raise DimensionMismatchError("matvec", f"vector of length {mat.shape[1]}", vec.shape[0])
    return mat @ vec


def singular_values(m: ArrayLike) -> DenseVector:
    """All singular values in descending order."""
    return np.linalg.svd(as_matrix(m), compute_uv=False)


def rank_tolerance(m: ArrayLike, sigma_max: float | None = None) -> float:
    """Numerical-rank threshold eps * max(rows, cols) * sigma_max."""
    mat = as_matrix(m)
    if sigma_max is None:
        sv = singular_values(mat)
        sigma_max = float(sv[0]) if sv.size else 0.0
    return EPS * max(mat.shape) * sigma_max


def singular_values_extreme(m: ArrayLike) -> tuple[float, float]:
    """Largest singular value and smallest singular value above the rank tolerance.

    Args:
        m: Nonzero matrix.

    Returns:
        Tuple of (sigma_max, sigma_min_positive).

    Raises:
        ZeroMatrixError: If no singular value exceeds the rank tolerance.
    """
    mat = as_matrix(m)
    sv = singular_values(mat) if mat.size else np.empty(0)
    if sv.size == 0 or sv[0] == 0.0:
        raise ZeroMatrixError(mat.shape)
    sigma_max = float(sv[0])
    tau = rank_tolerance(mat, sigma_max)
    positive = sv[sv > tau]
    if positive.size == 0:
        raise ZeroMatrixError(mat.shape)
    return sigma_max, float(positive[-1])


def kernel_dimension(m: ArrayLike) -> int:
    """Dimension of the numerical null space of m (column space side)."""
    mat = as_matrix(m)
    sv = singular_values(mat) if mat.size else np.empty(0)
    if sv.size == 0:
        return mat.shape[1]
    tau = rank_tolerance(mat, float(sv[0]))
    rank = int(np.count_nonzero(sv > tau)) if sv[0] > 0 else 0
    return mat.shape[1] - rank


def min_norm_least_squares(m: ArrayLike, rhs: ArrayLike) -> DenseVector:
    """Minimum-norm minimizer of |m v - rhs| via the truncated pseudoinverse.

    Args:
        m: Matrix of shape (rows, cols).
        rhs: Vector of length rows.

    Returns:
        Vector of length cols.

    Raises:
        DimensionMismatchError: If rows does not match the rhs length.
    """
    mat = as_matrix(m)
    vec = as_vector(rhs)
    if mat.shape[0] != vec.shape[0]:
        raise DimensionMismatchError(
            "min_norm_least_squares", f"rhs of length {mat.shape[0]}", vec.shape[0]
        )
    if mat.size == 0:
        return np.zeros(mat.shape[1])

    u, s, vt = np.linalg.svd(mat, full_matrices=False)
    tau = rank_tolerance(mat, float(s[0]))
    keep = s > tau
    inv = np.zeros_like(s)
    inv[keep] = 1.0 / s[keep]
    return vt.T @ (inv * (u.T @ vec))


def symmetric_min_eigenvalue(m: ArrayLike) -> float:
    """Smallest eigenvalue of the symmetric part of a square matrix."""
    mat = as_matrix(m)
    if mat.shape[0] != mat.shape[1]:
        raise DimensionMismatchError("symmetric_min_eigenvalue", "square matrix", mat.shape)
    if mat.size == 0:
        return 0.0
    return float(np.linalg.eigvalsh(0.5 * (mat + mat.T))[0])
