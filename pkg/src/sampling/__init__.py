"""Sampling package - sub-sample selection for the Nystrom extension."""

from src.sampling.models import (
    ALGORITHM1,
    ALGORITHM1_FAILURE,
    EXACT_SVD,
    ICD,
    KMEANS,
    LINEAR_TIME_SVD,
    RANDOM,
    DegenerateSamplingError,
    InvalidSampleSizeError,
    PsdViolationError,
    RrqrPivots,
    SampleSelection,
    SamplerConfig,
    SamplingError,
    ThinDecomposition,
)
from src.sampling.rrqr import rrqr_select
from src.sampling.samplers import (
    icd_sample,
    kmeans_sample,
    monte_carlo_select,
    random_sample,
    run_sampler,
    select_sample,
)
from src.sampling.seeds import derive_seed, make_rng
from src.sampling.thin import estimate_residual_norm, linear_time_svd, measured_gamma, thin_svd
