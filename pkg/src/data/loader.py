"""LIBSVM dataset reading, writing and cached loading."""

import logging
from pathlib import Path
from typing import Dict, List, Optional, Union

import numpy as np

from src.data.models import DATASET_MAPPING, DataLoadError, Dataset, DatasetNotFoundError


logger = logging.getLogger(__name__)

PathLike = Union[str, Path]


def parse_libsvm(path: PathLike, n_features: Optional[int] = None, name: Optional[str] = None) -> Dataset:
    """Read `label idx:val ...` lines (1-based idx) into a dense Dataset.

    Missing features are zero. The dimension is the largest index seen
    unless n_features is given.
    """
    path = Path(path)
    try:
        with open(path, "r") as f:
            lines = f.readlines()
    except OSError as e:
        raise DataLoadError(f"Failed to read LIBSVM file {path}: {e}") from e

    labels: List[float] = []
    entries: List[Dict[int, float]] = []
    max_index = 0

    for lineno, raw in enumerate(lines, start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue

        tokens = line.split()
        try:
            label = float(tokens[0])
        except ValueError:
            raise DataLoadError(f"{path}:{lineno}: invalid label {tokens[0]!r}")

        row: Dict[int, float] = {}
        for token in tokens[1:]:
            idx_text, sep, value_text = token.partition(":")
            if not sep:
                raise DataLoadError(f"{path}:{lineno}: expected idx:val, got {token!r}")
            try:
                idx = int(idx_text)
                value = float(value_text)
            except ValueError:
                raise DataLoadError(f"{path}:{lineno}: malformed feature {token!r}")
            if idx < 1:
                raise DataLoadError(f"{path}:{lineno}: feature index {idx} is not 1-based")
            if not np.isfinite(value):
                raise DataLoadError(f"{path}:{lineno}: non-finite value in {token!r}")
            row[idx] = value
            max_index = max(max_index, idx)

        labels.append(label)
        entries.append(row)

    if not entries:
        raise DataLoadError(f"LIBSVM file {path} contains no data")

    d = n_features if n_features is not None else max_index
    if max_index > d:
        raise DataLoadError(f"{path}: feature index {max_index} exceeds n_features={d}")

    values = np.zeros((len(entries), d))
    for i, row in enumerate(entries):
        for idx, value in row.items():
            values[i, idx - 1] = value

    logger.info(f"Parsed {path.name}: {values.shape[0]} points, {d} features")
    return Dataset(values=values, name=name or path.name, labels=np.asarray(labels))


def write_libsvm(ds: Dataset, path: PathLike) -> Path:
    """Write ds in LIBSVM format, zeros omitted, values at full precision."""
    path = Path(path)
    labels = ds.labels if ds.labels is not None else np.zeros(ds.n)

    lines = []
    for label, row in zip(labels, ds.values):
        features = " ".join(f"{j + 1}:{row[j]!r}" for j in np.flatnonzero(row))
        label_text = f"{int(label)}" if float(label).is_integer() else repr(float(label))
        lines.append(f"{label_text} {features}".rstrip())

    try:
        path.write_text("\n".join(lines) + "\n")
    except OSError as e:
        raise DataLoadError(f"Failed to write LIBSVM file {path}: {e}") from e
    return path


class DataLoader:
    """Loads and caches benchmark datasets from a local directory."""

    def __init__(self, data_path: PathLike):
        """Initialize with path to data directory."""
        self.data_path = Path(data_path)
        self._cache: Dict[str, Dataset] = {}

    def available(self) -> List[str]:
        """Names from DATASET_MAPPING whose file is present."""
        return [
            name for name, info in DATASET_MAPPING.items()
            if (self.data_path / info["file"]).exists()
        ]

    def load(self, dataset_name: str) -> Optional[Dataset]:
        """Load a benchmark dataset by name.

        Returns None when the file is not in the data directory.
        """
        if dataset_name in self._cache:
            logger.info(f"Loading {dataset_name} from cache")
            return self._cache[dataset_name]

        if dataset_name not in DATASET_MAPPING:
            raise DatasetNotFoundError(
                f"Unknown dataset: {dataset_name}. "
                f"Available datasets: {', '.join(DATASET_MAPPING)}"
            )

        info = DATASET_MAPPING[dataset_name]
        file_path = self.data_path / info["file"]
        if not file_path.exists():
            logger.warning(f"Dataset file not found: {file_path}")
            return None

        ds = parse_libsvm(file_path, name=dataset_name)
        if ds.d < info["features"]:
            # trailing all-zero features never show up in the file
            padded = np.zeros((ds.n, info["features"]))
            padded[:, :ds.d] = ds.values
            ds = Dataset(values=padded, name=dataset_name, labels=ds.labels)
        if ds.n != info["samples"]:
            logger.warning(
                f"{dataset_name}: expected {info['samples']} samples, parsed {ds.n}"
            )

        self._cache[dataset_name] = ds
        logger.info(f"Loaded {dataset_name}: {ds.n} points, {ds.d} features")
        return ds
