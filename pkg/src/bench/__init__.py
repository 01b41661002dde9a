"""Bench package - experiments, result tables and the command line."""

from src.bench.experiments import (
    run_experiment,
    run_kernel_experiment,
    run_singularity_experiment,
    run_synthetic_experiment,
    sample_size,
)
from src.bench.models import (
    CSV_HEADER,
    ExperimentResult,
    ExperimentSpec,
    OutputError,
    ResultRow,
)
from src.bench.outputs import emit_outputs, read_results, summarize_rows, write_results
