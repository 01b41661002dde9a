"""Data models for sub-sample selection."""

from dataclasses import dataclass, field
from typing import Any, Dict, Optional

import numpy as np

from src.linalg.models import DenseMatrix, IndexSet


# exceptions for sampler failures

class SamplingError(Exception):
    """Base class for sampler failures."""
    pass


class DegenerateSamplingError(SamplingError):
    """Raised when column sampling has no mass to sample from."""
    pass


class PsdViolationError(SamplingError):
    """Raised when incomplete Cholesky meets a negative diagonal residual."""
    pass


class InvalidSampleSizeError(SamplingError, ValueError):
    """Raised when s does not fit the matrix."""
    pass


ALGORITHM1 = "algorithm1"
RANDOM = "random"
ICD = "icd"
KMEANS = "kmeans"
SAMPLER_METHODS = (ALGORITHM1, RANDOM, ICD, KMEANS)

EXACT_SVD = "exact_svd"
LINEAR_TIME_SVD = "linear_time_svd"
THIN_FRONT_ENDS = (EXACT_SVD, LINEAR_TIME_SVD)

STATUS_OK = "ok"
STATUS_FAILED = "failed"

ALGORITHM1_FAILURE = "Algorithm failed. Please pick a different value for s."


@dataclass
class ThinDecomposition:
    """Rank-s product M ~ G S with its spectral residual and gamma."""
    G: DenseMatrix
    S: DenseMatrix
    e_s: float
    gamma: float
    method: str = EXACT_SVD

    def __post_init__(self):
        if self.G.shape[1] != self.S.shape[0]:
            raise ValueError(
                f"Inner dimensions differ: G is {self.G.shape}, S is {self.S.shape}"
            )
        if self.e_s < 0:
            raise ValueError(f"e_s must be non-negative, got {self.e_s}")
        if not self.gamma >= 1.0 - 1e-9:
            raise ValueError(f"gamma must be >= 1, got {self.gamma}")

    @property
    def s(self) -> int:
        return self.G.shape[1]

    def product(self) -> DenseMatrix:
        return self.G @ self.S


@dataclass
class RrqrPivots:
    """Pivot columns picked by rank-revealing QR."""
    indices: IndexSet
    rank_deficient: bool = False
    swaps: int = 0
    budget_exhausted: bool = False


@dataclass
class SampleSelection:
    """Chosen rows/columns plus the audit values Theorem-style checks need.

    On status 'failed' the indices may still be present (for example when
    the sample block turned out singular), and reason says why.
    """
    rows: Optional[IndexSet]
    cols: Optional[IndexSet]
    sigma_s_A: float
    beta_bound: float
    e_s: Optional[float] = None
    gamma: Optional[float] = None
    status: str = STATUS_OK
    reason: Optional[str] = None
    method: str = ALGORITHM1
    seed: Optional[int] = None
    diagnostics: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.status not in (STATUS_OK, STATUS_FAILED):
            raise ValueError(
                f"Invalid status: {self.status}. Expected 'ok' or 'failed'"
            )

        if self.status == STATUS_OK:
            if self.rows is None or self.cols is None:
                raise ValueError("A successful selection needs row and column indices")
            if len(self.rows) != len(self.cols):
                raise ValueError(
                    f"Row and column sets differ in size: {len(self.rows)} vs {len(self.cols)}"
                )
            # NaN marks an index-only draw that never saw the matrix
            if not (np.isnan(self.sigma_s_A) or self.sigma_s_A > 0):
                raise ValueError(
                    f"A successful selection needs sigma_s(A_M) > 0, got {self.sigma_s_A}"
                )
        elif not self.reason:
            raise ValueError("A failed selection needs a reason")

    @property
    def ok(self) -> bool:
        return self.status == STATUS_OK

    @property
    def s(self) -> int:
        return len(self.rows) if self.rows is not None else 0


@dataclass
class SamplerConfig:
    """How to pick a sample.

    swap_budget None means 4 * s. columns None means min(n, 10 * s).
    """
    method: str = ALGORITHM1
    thin_front_end: str = EXACT_SVD
    seed: int = 0
    columns: Optional[int] = None
    kmeans_iters: int = 100
    kmeans_restarts: int = 10
    swap_budget: Optional[int] = None
    rank_threshold: float = 1e12
    column_probabilities: str = "norm"
    symmetric: bool = False
    workers: int = 1
    icd_trace_tol: Optional[float] = None

    def __post_init__(self):
        if self.method not in SAMPLER_METHODS:
            raise ValueError(
                f"Invalid method: {self.method}. Expected one of {list(SAMPLER_METHODS)}"
            )
        if self.thin_front_end not in THIN_FRONT_ENDS:
            raise ValueError(
                f"Invalid thin_front_end: {self.thin_front_end}. "
                f"Expected one of {list(THIN_FRONT_ENDS)}"
            )
        if self.column_probabilities not in ("norm", "uniform"):
            raise ValueError(
                f"Invalid column_probabilities: {self.column_probabilities}. "
                f"Expected 'norm' or 'uniform'"
            )
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError(f"seed must fit in 64 bits, got {self.seed}")
        if self.kmeans_iters < 1:
            raise ValueError(f"kmeans_iters must be >= 1, got {self.kmeans_iters}")
        if self.kmeans_restarts < 1:
            raise ValueError(f"kmeans_restarts must be >= 1, got {self.kmeans_restarts}")
        if self.swap_budget is not None and self.swap_budget < 0:
            raise ValueError(f"swap_budget must be >= 0, got {self.swap_budget}")
        if self.rank_threshold <= 1:
            raise ValueError(f"rank_threshold must be > 1, got {self.rank_threshold}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")

    def validate_for(self, m: int, n: int, s: int) -> None:
        """Check s <= min(m, n) and c >= s for this matrix."""
        if not 1 <= s <= min(m, n):
            raise InvalidSampleSizeError(
                f"Sample size {s} must lie in [1, {min(m, n)}] for a {m}x{n} matrix"
            )
        if self.columns is not None and not s <= self.columns:
            raise InvalidSampleSizeError(
                f"Column count c={self.columns} must be >= s={s}"
            )

    def columns_for(self, n: int, s: int) -> int:
        return self.columns if self.columns is not None else min(n, 10 * s)

    def swap_budget_for(self, s: int) -> int:
        return self.swap_budget if self.swap_budget is not None else 4 * s
