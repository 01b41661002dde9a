"""Data models for the Nystrom extension and its canonical decompositions."""

from dataclasses import dataclass, field
from typing import Any, Dict

import numpy as np

from src.linalg.models import BlockPartition, DenseMatrix, NoRealSquareRoot


# exceptions for extension and decomposition failures

class NystromError(Exception):
    """Base class for Nystrom construction failures."""
    pass


class ZeroEigenvalue(NystromError):
    """Raised when the sample block has an eigenvalue at or below tolerance."""
    pass


class ComplexSpectrum(NystromError):
    """Raised when a real EVD is required but the spectrum has complex pairs."""
    pass


class DefectiveEigenbasis(NystromError):
    """Raised when the eigenvector matrix is numerically singular."""
    pass


class NegativeEigenvalue(NystromError):
    """Raised when a square root of a negative eigenvalue would be needed."""
    pass


class SingularSample(NystromError):
    """Raised when sigma_s of the sample block is at or below tolerance."""
    pass


class IndefiniteSampleError(NegativeEigenvalue):
    """Raised by the symmetric constructors on an indefinite sample block.

    The general SVD constructors still apply.
    """
    pass


class AsymmetricInputError(NystromError):
    """Raised when a symmetric constructor sees non-symmetric blocks."""
    pass


class PivotMismatchError(NystromError):
    """Raised when an EVD or symmetric path gets different row and column pivots."""
    pass


SVD_KIND = "svd"
EVD_KIND = "evd"
GENERAL = "general"
SINGLE_STEP = "single_step"


@dataclass
class ExtendedVectors:
    """Extended eigen/singular vectors in pivoted order.

    left is m x s. On the EVD path right is V-hat (s x n) and
    M-hat = left diag(values) right. On the SVD path right is H-hat (n x s)
    and M-hat = left diag(values) right^T.
    """
    left: DenseMatrix
    values: np.ndarray
    right: DenseMatrix
    path: str
    partition: BlockPartition

    def __post_init__(self):
        if self.path not in (SVD_KIND, EVD_KIND):
            raise ValueError(f"Invalid path: {self.path}. Expected 'svd' or 'evd'")

        s = self.values.shape[0]
        if self.left.shape != (self.partition.m, s):
            raise ValueError(
                f"Left vectors have shape {self.left.shape}, expected {(self.partition.m, s)}"
            )
        expected = (s, self.partition.n) if self.path == EVD_KIND else (self.partition.n, s)
        if self.right.shape != expected:
            raise ValueError(f"Right vectors have shape {self.right.shape}, expected {expected}")

    def densify(self) -> DenseMatrix:
        """Pivoted M-hat."""
        right = self.right if self.path == EVD_KIND else self.right.T
        return (self.left * self.values) @ right


@dataclass
class NystromFactorization:
    """M-hat = [A; F] A^+ [A B], kept in factored form."""
    left: DenseMatrix
    core: DenseMatrix
    right: DenseMatrix
    partition: BlockPartition

    @property
    def rank_bound(self) -> int:
        return self.partition.s

    def approximate_block(self) -> DenseMatrix:
        """F A^+ B, the only block the extension changes."""
        p = self.partition
        return p.F @ self.core @ p.B


@dataclass
class CanonicalDecomposition:
    """U_o diag(values) (H_o^T | V_o) in source index order.

    kind 'svd': right is H_o (n x s), both factors have orthonormal columns.
    kind 'evd': right is V_o (s x n) and V_o U_o = I.
    """
    left: DenseMatrix
    values: np.ndarray
    right: DenseMatrix
    kind: str
    method: str
    symmetric: bool
    partition: BlockPartition
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in (SVD_KIND, EVD_KIND):
            raise ValueError(f"Invalid kind: {self.kind}. Expected 'svd' or 'evd'")
        if self.method not in (GENERAL, SINGLE_STEP):
            raise ValueError(
                f"Invalid method: {self.method}. Expected 'general' or 'single_step'"
            )
        if self.kind == SVD_KIND and np.any(self.values < 0):
            raise ValueError("SVD values must be non-negative")

    @property
    def rank(self) -> int:
        return int(self.values.shape[0])

    def to_dense(self) -> DenseMatrix:
        right = self.right.T if self.kind == SVD_KIND else self.right
        return (self.left * self.values) @ right

    def orthogonality_residual(self) -> float:
        """max |U^T U - I| and |H^T H - I| (SVD kind only)."""
        if self.kind != SVD_KIND:
            raise ValueError("Orthogonality residual applies to SVD-kind results")
        k = self.rank
        eye = np.eye(k)
        left = np.max(np.abs(self.left.T @ self.left - eye)) if k else 0.0
        right = np.max(np.abs(self.right.T @ self.right - eye)) if k else 0.0
        return float(max(left, right))

    def biorthogonality_residual(self) -> float:
        """max |V_o U_o - I| (EVD kind only)."""
        if self.kind != EVD_KIND:
            raise ValueError("Biorthogonality residual applies to EVD-kind results")
        k = self.rank
        if k == 0:
            return 0.0
        return float(np.max(np.abs(self.right @ self.left - np.eye(k))))


__all__ = [
    "NystromError",
    "ZeroEigenvalue",
    "ComplexSpectrum",
    "DefectiveEigenbasis",
    "NegativeEigenvalue",
    "SingularSample",
    "IndefiniteSampleError",
    "AsymmetricInputError",
    "PivotMismatchError",
    "NoRealSquareRoot",
    "ExtendedVectors",
    "NystromFactorization",
    "CanonicalDecomposition",
]
