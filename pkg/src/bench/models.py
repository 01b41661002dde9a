"""Data models for the benchmark harness."""

from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import pandas as pd


class OutputError(Exception):
    """Raised when result files cannot be written or read back."""
    pass


KERNEL = "kernel"
SYNTHETIC = "synthetic"
SINGULARITY = "singularity"
EXPERIMENTS = (KERNEL, SYNTHETIC, SINGULARITY)

SVD_BENCHMARK = "svd"
LINEAR_TIME_SVD = "linear_time_svd"
NYSTROM_SAMPLERS = ("random", "algorithm1", "icd", "kmeans")
SAMPLERS = NYSTROM_SAMPLERS + (LINEAR_TIME_SVD, SVD_BENCHMARK)

# Samplers each experiment can run
ALLOWED_SAMPLERS = {
    KERNEL: SAMPLERS,
    SYNTHETIC: ("random", "algorithm1", LINEAR_TIME_SVD, SVD_BENCHMARK),
    SINGULARITY: ("random", "algorithm1"),
}

DEFAULT_SAMPLERS = {
    KERNEL: ["random", LINEAR_TIME_SVD, "algorithm1", "icd", "kmeans", SVD_BENCHMARK],
    SYNTHETIC: ["random", LINEAR_TIME_SVD, "algorithm1", SVD_BENCHMARK],
    SINGULARITY: ["random", "algorithm1"],
}

# Samplers with no randomness only run trial 0
DETERMINISTIC_SAMPLERS = ("icd", SVD_BENCHMARK)

CSV_COLUMNS = ["experiment", "sampler", "ratio", "trial", "error", "sigma_s_am", "bound", "ms", "seed"]
CSV_HEADER = ",".join(CSV_COLUMNS)


@dataclass
class ExperimentSpec:
    """One benchmark run: which matrix, which samplers, which sample ratios."""
    experiment: str
    samplers: List[str]
    ratios: List[float]
    trials: int = 20
    seed: int = 0
    norm: str = "l2"
    output_dir: Path = Path("results")
    input_path: Optional[Path] = None
    dataset: Optional[str] = None
    blobs: Tuple[int, int, int] = (300, 2, 3)
    size: int = 500
    decays: List[str] = field(default_factory=lambda: ["exponential", "linear"])
    rank: Optional[int] = None
    front_end: str = "linear_time_svd"
    workers: int = 1
    plot: bool = False

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ValueError(
                f"Invalid experiment: {self.experiment}. Expected one of {list(EXPERIMENTS)}"
            )
        if not self.samplers:
            raise ValueError("Sampler list cannot be empty")

        allowed = ALLOWED_SAMPLERS[self.experiment]
        unknown = [s for s in self.samplers if s not in allowed]
        if unknown:
            raise ValueError(
                f"Samplers {unknown} are not available for the {self.experiment} experiment. "
                f"Expected a subset of {list(allowed)}"
            )

        if not self.ratios:
            raise ValueError("ratios cannot be empty")
        for ratio in self.ratios:
            if not 0 < ratio <= 1:
                raise ValueError(f"Sample ratio {ratio} is outside (0, 1]")

        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.norm not in ("l2", "fro"):
            raise ValueError(f"Invalid norm: {self.norm}. Expected 'l2' or 'fro'")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if self.size < 2:
            raise ValueError(f"size must be >= 2, got {self.size}")

        self.output_dir = Path(self.output_dir)
        if self.input_path is not None:
            self.input_path = Path(self.input_path)


@dataclass
class ResultRow:
    """One (sampler, ratio, trial) cell. error None marks a failed sampler run."""
    experiment: str
    sampler: str
    ratio: float
    trial: int
    error: Optional[float]
    sigma_s_am: Optional[float]
    bound: Optional[float]
    ms: float
    seed: int

    def __post_init__(self):
        if self.error is not None and self.error < 0:
            raise ValueError(f"error must be non-negative, got {self.error}")
        if "," in self.experiment or "," in self.sampler:
            raise ValueError("experiment and sampler names cannot contain commas")

    @property
    def failed(self) -> bool:
        return self.error is None

    def as_dict(self) -> Dict[str, Any]:
        return {name: getattr(self, name) for name in CSV_COLUMNS}


@dataclass
class ExperimentResult:
    """Rows in run order plus the experiment's summary statistics."""
    experiment: str
    slug: str
    rows: List[ResultRow]
    summary: Dict[str, Any] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([r.as_dict() for r in self.rows], columns=CSV_COLUMNS)
