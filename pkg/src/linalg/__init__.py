"""Linalg package - dense matrix container and classical factorizations."""

from src.linalg.core import (
    as_matrix,
    condition_number,
    default_tolerance,
    frobenius_norm,
    full_evd,
    full_svd,
    matrix_sqrt,
    normalize_signs,
    numerical_rank,
    partition,
    pseudo_inverse,
    reassemble,
    restore_order,
    sigma_k,
    singular_values,
    spectral_norm,
    unpermute_rows,
)
from src.linalg.models import (
    BlockPartition,
    DenseMatrix,
    EvdResult,
    IndexSet,
    InvalidIndexSetError,
    InvalidMatrixError,
    LinalgError,
    NoRealSquareRoot,
    SvdConvergenceError,
    SvdResult,
)
