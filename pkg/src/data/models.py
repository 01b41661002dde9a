"""Data models for benchmark inputs.

Defines dataclasses for point datasets and synthetic matrix specs, plus the
benchmark dataset table.
"""

from dataclasses import dataclass
from typing import Dict, Optional

import numpy as np


# exceptions for data loading errors

class DatasetNotFoundError(Exception):
    """Raised when dataset name is invalid."""
    pass


class DataLoadError(Exception):
    """Raised when data file cannot be loaded."""
    pass


class DegenerateDatasetError(Exception):
    """Raised when a kernel bandwidth would be zero."""
    pass


# Benchmark datasets: file name in the LIBSVM archive, sample count, dimension
DATASET_MAPPING: Dict[str, Dict] = {
    "german.numer": {"file": "german.numer", "samples": 1000, "features": 24},
    "splice": {"file": "splice", "samples": 1000, "features": 60},
    "adult1a": {"file": "a1a", "samples": 1605, "features": 123},
    "dna": {"file": "dna.scale", "samples": 2000, "features": 180},
    "segment": {"file": "segment.scale", "samples": 2310, "features": 19},
    "w1a": {"file": "w1a", "samples": 2477, "features": 300},
    "svmgd1a": {"file": "svmguide1", "samples": 3089, "features": 4},
    "satimage": {"file": "satimage.scale", "samples": 4435, "features": 36},
}

LINEAR = "linear"
EXPONENTIAL = "exponential"


@dataclass
class Dataset:
    """n points in d dimensions; labels are carried but never used by kernels."""
    values: np.ndarray
    name: str = "unnamed"
    labels: Optional[np.ndarray] = None

    def __post_init__(self):
        self.values = np.asarray(self.values, dtype=np.float64)
        if self.values.ndim != 2:
            raise ValueError(
                f"Dataset values must be 2-D, got {self.values.ndim} dimensions"
            )
        if self.values.shape[0] < 1:
            raise ValueError("Dataset needs at least one point")
        if not np.all(np.isfinite(self.values)):
            raise ValueError(f"Dataset {self.name} contains NaN or Inf values")

        if self.labels is not None:
            self.labels = np.asarray(self.labels, dtype=np.float64)
            if self.labels.shape != (self.values.shape[0],):
                raise ValueError(
                    f"Got {self.labels.shape[0]} labels for {self.values.shape[0]} points"
                )

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def d(self) -> int:
        return self.values.shape[1]


@dataclass
class SyntheticSpec:
    """U L V^T test matrix with a prescribed spectrum.

    linear: L_ii = 1 - (i - 1)/n. exponential: L_ii = rate^(i - 1).
    rank, when set, zeroes every value past the first `rank`.
    """
    n: int
    decay: str = EXPONENTIAL
    rate: float = 0.5
    seed: int = 0
    rank: Optional[int] = None

    def __post_init__(self):
        if self.n < 2:
            raise ValueError(f"n must be >= 2, got {self.n}")
        if self.decay not in (LINEAR, EXPONENTIAL):
            raise ValueError(
                f"Invalid decay: {self.decay}. Expected 'linear' or 'exponential'"
            )
        if self.decay == EXPONENTIAL and not 0 < self.rate < 1:
            raise ValueError(f"Exponential rate must lie in (0, 1), got {self.rate}")
        if self.rank is not None and not 1 <= self.rank <= self.n:
            raise ValueError(f"rank must lie in [1, {self.n}], got {self.rank}")
