"""Data package - dataset loading, kernels and synthetic inputs."""

from src.data.generators import (
    gaussian_blobs,
    gaussian_kernel,
    haar_orthogonal,
    kernel_bandwidth,
    synthetic_matrix,
    synthetic_spectrum,
)
from src.data.loader import DataLoader, parse_libsvm, write_libsvm
from src.data.models import (
    DATASET_MAPPING,
    DataLoadError,
    Dataset,
    DatasetNotFoundError,
    DegenerateDatasetError,
    SyntheticSpec,
)
