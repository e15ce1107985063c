"""Dense kernels, spectral quantities, least squares and seeded sampling."""

from .identities import IdentityEstimate, gaussian_identity_check
from .linalg import (
    EPS,
    DenseMatrix,
    DenseVector,
    as_matrix,
    as_vector,
    kernel_dimension,
    matvec,
    min_norm_least_squares,
    rank_tolerance,
    singular_values,
    singular_values_extreme,
    symmetric_min_eigenvalue,
)
from .random import RngStream, sample_std_normal

__all__ = [
    "EPS",
    "DenseMatrix",
    "DenseVector",
    "IdentityEstimate",
    "RngStream",
    "as_matrix",
    "as_vector",
    "gaussian_identity_check",
    "kernel_dimension",
    "matvec",
    "min_norm_least_squares",
    "rank_tolerance",
    "sample_std_normal",
    "singular_values",
    "singular_values_extreme",
    "symmetric_min_eigenvalue",
]
