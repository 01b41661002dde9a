"""Data models for the dense linear algebra layer.

Matrices are plain numpy float64 arrays in row-major (C) order. The
records below carry index sets, block partitions and factorization results.
"""

from dataclasses import dataclass, field
from typing import Tuple, Union

import numpy as np


# Matrices everywhere are 2-D, float64, C-contiguous.
DenseMatrix = np.ndarray


# exceptions for linear algebra failures

class LinalgError(Exception):
    """Base class for dense linear algebra failures."""
    pass


class InvalidMatrixError(LinalgError, ValueError):
    """Raised when an input is not a finite 2-D real matrix."""
    pass


class InvalidIndexSetError(LinalgError, ValueError):
    """Raised when pivot indices are out of range, duplicated or mis-sized."""
    pass


class SvdConvergenceError(LinalgError):
    """Raised when LAPACK fails to converge on an SVD."""
    pass


class NoRealSquareRoot(LinalgError):
    """Raised when a matrix has no real principal square root we can trust."""
    pass


@dataclass(frozen=True)
class IndexSet:
    """Ordered, duplicate-free 0-based positions within [0, bound)."""
    indices: Tuple[int, ...]
    bound: int

    def __post_init__(self):
        try:
            normalized = tuple(int(i) for i in self.indices)
        except (TypeError, ValueError):
            raise InvalidIndexSetError(
                f"Invalid indices: {self.indices!r}. Expected integers"
            )
        object.__setattr__(self, "indices", normalized)

        if self.bound < 0:
            raise InvalidIndexSetError(f"Invalid bound: {self.bound}. Expected >= 0")

        for i in normalized:
            if not 0 <= i < self.bound:
                raise InvalidIndexSetError(
                    f"Index {i} is outside valid range [0, {self.bound})"
                )

        if len(set(normalized)) != len(normalized):
            raise InvalidIndexSetError(f"Duplicate indices in {list(normalized)}")

    def __len__(self) -> int:
        return len(self.indices)

    def __iter__(self):
        return iter(self.indices)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.indices, dtype=np.intp)

    def complement(self) -> Tuple[int, ...]:
        """Positions not in the set, ascending."""
        chosen = set(self.indices)
        return tuple(i for i in range(self.bound) if i not in chosen)

    def order(self) -> np.ndarray:
        """Pivot permutation: chosen indices first, then the complement."""
        return np.asarray(self.indices + self.complement(), dtype=np.intp)


IndexLike = Union[IndexSet, Tuple[int, ...], list, np.ndarray]


@dataclass
class BlockPartition:
    """M split into the sample block A and its three neighbours.

    A = M[I, J], B = M[I, Jc], F = M[Ic, J], C = M[Ic, Jc]. All four blocks
    are copies, so the partition never aliases the source matrix.
    """
    m: int
    n: int
    s: int
    rows: IndexSet
    cols: IndexSet
    A: DenseMatrix
    B: DenseMatrix
    F: DenseMatrix
    C: DenseMatrix

    def __post_init__(self):
        if len(self.rows) != self.s or len(self.cols) != self.s:
            raise InvalidIndexSetError(
                f"Index sets have sizes {len(self.rows)} and {len(self.cols)}, "
                f"expected s={self.s}"
            )

        expected = {
            "A": (self.s, self.s),
            "B": (self.s, self.n - self.s),
            "F": (self.m - self.s, self.s),
            "C": (self.m - self.s, self.n - self.s),
        }
        for name, shape in expected.items():
            block = getattr(self, name)
            if block.shape != shape:
                raise InvalidMatrixError(
                    f"Block {name} has shape {block.shape}, expected {shape}"
                )

    @property
    def row_order(self) -> np.ndarray:
        return self.rows.order()

    @property
    def col_order(self) -> np.ndarray:
        return self.cols.order()

    @property
    def is_symmetric_pivot(self) -> bool:
        return self.m == self.n and self.rows.indices == self.cols.indices

    def reassemble(self) -> DenseMatrix:
        """Pivoted matrix [[A, B], [F, C]]."""
        top = np.hstack([self.A, self.B])
        bottom = np.hstack([self.F, self.C])
        return np.ascontiguousarray(np.vstack([top, bottom]))


@dataclass
class SvdResult:
    """M = U diag(values) V^T with orthonormal columns in U and V."""
    U: DenseMatrix
    values: np.ndarray
    V: DenseMatrix

    def __post_init__(self):
        k = self.values.shape[0]
        if self.U.shape[1] != k or self.V.shape[1] != k:
            raise InvalidMatrixError(
                f"Factor widths {self.U.shape[1]} and {self.V.shape[1]} "
                f"do not match {k} singular values"
            )
        if np.any(self.values < 0):
            raise ValueError("Singular values must be non-negative")

    def reconstruct(self) -> DenseMatrix:
        return (self.U * self.values) @ self.V.T


@dataclass
class EvdResult:
    """A = vectors diag(values) inverse.

    values are sorted by non-increasing magnitude. When the spectrum is not
    real, values and vectors are complex and inverse may still be present.
    inverse is None when the eigenbasis is numerically defective.
    """
    vectors: np.ndarray
    values: np.ndarray
    inverse: np.ndarray = None
    condition: float = 1.0
    defective: bool = False
    is_real: bool = True
    symmetric: bool = field(default=False)

    def __post_init__(self):
        k = self.values.shape[0]
        if self.vectors.shape != (k, k):
            raise InvalidMatrixError(
                f"Eigenvector matrix has shape {self.vectors.shape}, expected {(k, k)}"
            )

    def reconstruct(self) -> np.ndarray:
        if self.inverse is None:
            raise LinalgError("Eigenbasis is defective, no inverse available")
        return (self.vectors * self.values) @ self.inverse
