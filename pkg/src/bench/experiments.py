"""The three benchmark experiments: kernel matrices, synthetic spectra, sample singularity."""

import logging
import math
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple

import numpy as np
from scipy import stats

from src.bench.models import (
    DETERMINISTIC_SAMPLERS,
    ExperimentResult,
    ExperimentSpec,
    KERNEL,
    LINEAR_TIME_SVD,
    ResultRow,
    SINGULARITY,
    SVD_BENCHMARK,
    SYNTHETIC,
)
from src.bounds import BoundNotApplicable, L2, observed_error, summarize_from_svd, theorem2_bound
from src.data import (
    DataLoader,
    Dataset,
    SyntheticSpec,
    gaussian_blobs,
    gaussian_kernel,
    parse_libsvm,
    synthetic_matrix,
)
from src.linalg import LinalgError, SvdResult, as_matrix, frobenius_norm, full_svd, partition, spectral_norm
from src.nystrom import NystromError, factorize
from src.sampling import (
    ALGORITHM1,
    EXACT_SVD,
    SamplerConfig,
    SamplingError,
    derive_seed,
    linear_time_svd,
    run_sampler,
)


logger = logging.getLogger(__name__)

SYMMETRY_TOL = 1e-12


@dataclass
class MatrixCase:
    """One input matrix plus everything the cells share for it."""
    experiment_id: str
    matrix: np.ndarray
    svd: SvdResult
    symmetric: bool
    points: Optional[np.ndarray] = None


def sample_size(ratio: float, n: int) -> int:
    """s = round(ratio * n), at least 1 and at most n."""
    return min(n, max(1, int(round(ratio * n))))


def slugify(text: str) -> str:
    return re.sub(r"[^A-Za-z0-9._-]+", "-", text).strip("-") or "matrix"


def _is_symmetric(M: np.ndarray) -> bool:
    if M.shape[0] != M.shape[1]:
        return False
    scale = max(float(np.max(np.abs(M))), 1.0)
    return bool(np.max(np.abs(M - M.T)) <= SYMMETRY_TOL * scale)


def _make_case(experiment_id: str, M: np.ndarray, points: Optional[np.ndarray] = None) -> MatrixCase:
    M = as_matrix(M)
    return MatrixCase(
        experiment_id=experiment_id,
        matrix=M,
        svd=full_svd(M),
        symmetric=_is_symmetric(M),
        points=points,
    )


def _is_deterministic(sampler: str, spec: ExperimentSpec) -> bool:
    if sampler in DETERMINISTIC_SAMPLERS:
        return True
    return sampler == ALGORITHM1 and spec.front_end == EXACT_SVD


def _truncation_error(svd: SvdResult, s: int, norm: str) -> float:
    tail = svd.values[s:]
    if tail.size == 0:
        return 0.0
    if norm == L2:
        return float(tail[0])
    return float(np.sqrt(np.sum(tail ** 2)))


def _nystrom_cell(
    case: MatrixCase,
    spec: ExperimentSpec,
    sampler: str,
    s: int,
    seed: int,
) -> Tuple[Optional[float], Optional[float], Optional[float]]:
    """(error, sigma_s(A_M), bound) for one sampler run; all None when the sampler fails."""
    M = case.matrix
    cfg = SamplerConfig(
        method=sampler,
        thin_front_end=spec.front_end,
        seed=seed,
        symmetric=case.symmetric,
    )
    sel = run_sampler(M, s, cfg, seed=seed, points=case.points)
    if not sel.ok:
        logger.debug(f"{case.experiment_id}: {sampler} failed at s={s}: {sel.reason}")
        return None, None, None

    try:
        f = factorize(partition(M, sel.rows, sel.cols))
        error = observed_error(M, f, norm=spec.norm)
    except (NystromError, LinalgError) as e:
        logger.warning(f"{case.experiment_id}: {sampler} sample at s={s} could not be extended: {e}")
        return None, None, None

    bound = None
    if spec.norm == L2:
        try:
            summary = summarize_from_svd(M, case.svd, sel.rows, sel.cols)
            bound = theorem2_bound(summary).value
        except BoundNotApplicable as e:
            logger.debug(f"{case.experiment_id}: no bound for {sampler} at s={s}: {e}")

    return float(error), float(sel.sigma_s_A), bound


def run_cell(case: MatrixCase, spec: ExperimentSpec, sampler: str, ratio: float, trial: int) -> ResultRow:
    """Run one (sampler, ratio, trial) cell. Never raises for sampler failures."""
    n = min(case.matrix.shape)
    s = sample_size(ratio, n)
    seed = derive_seed(spec.seed, trial)

    start = time.perf_counter()
    error: Optional[float] = None
    sigma: Optional[float] = None
    bound: Optional[float] = None

    if sampler == SVD_BENCHMARK:
        error = _truncation_error(case.svd, s, spec.norm)
    elif sampler == LINEAR_TIME_SVD:
        try:
            thin = linear_time_svd(case.matrix, s, seed=seed)
            diff = case.matrix - thin.product()
            error = spectral_norm(diff) if spec.norm == L2 else frobenius_norm(diff)
        except (SamplingError, LinalgError) as e:
            logger.warning(f"{case.experiment_id}: linear_time_svd failed at s={s}: {e}")
    else:
        error, sigma, bound = _nystrom_cell(case, spec, sampler, s, seed)

    ms = (time.perf_counter() - start) * 1000.0
    return ResultRow(
        experiment=case.experiment_id,
        sampler=sampler,
        ratio=float(ratio),
        trial=trial,
        error=error,
        sigma_s_am=sigma,
        bound=bound,
        ms=ms,
        seed=seed,
    )


def run_cases(cases: List[MatrixCase], spec: ExperimentSpec) -> List[ResultRow]:
    """All cells over all cases, in (case, sampler, ratio, trial) order regardless of workers."""
    cells = []
    for case in cases:
        for sampler in spec.samplers:
            trials = 1 if _is_deterministic(sampler, spec) else spec.trials
            for ratio in spec.ratios:
                for trial in range(trials):
                    cells.append((case, sampler, ratio, trial))

    logger.info(f"Running {len(cells)} cells with {spec.workers} worker(s)")
    with ThreadPoolExecutor(max_workers=spec.workers) as pool:
        rows = list(pool.map(lambda c: run_cell(c[0], spec, c[1], c[2], c[3]), cells))

    failed = sum(r.failed for r in rows)
    if failed:
        logger.info(f"{failed} of {len(rows)} cells failed")
    return rows


def load_kernel_source(spec: ExperimentSpec, data_dir: Optional[Path] = None) -> Dataset:
    """Points for the kernel experiment: --input file, named dataset, or gaussian blobs."""
    if spec.input_path is not None:
        return parse_libsvm(spec.input_path)

    if spec.dataset is not None:
        if data_dir is None:
            logger.warning(f"No data directory configured for {spec.dataset}; using gaussian blobs")
        else:
            ds = DataLoader(data_dir).load(spec.dataset)
            if ds is not None:
                return ds
            logger.warning(f"{spec.dataset} is not in {data_dir}; using gaussian blobs")

    n, d, k = spec.blobs
    return gaussian_blobs(n, d, k, seed=spec.seed)


def run_kernel_experiment(spec: ExperimentSpec, data_dir: Optional[Path] = None) -> ExperimentResult:
    """Gaussian kernel of a dataset, every sampler against the truncated SVD."""
    if spec.experiment != KERNEL:
        raise ValueError(f"Expected a kernel spec, got {spec.experiment}")

    ds = load_kernel_source(spec, data_dir)
    K = gaussian_kernel(ds)
    slug = slugify(ds.name)
    logger.info(f"Kernel experiment on {ds.name}: {ds.n} points, {ds.d} features")

    rows = run_cases([_make_case(f"kernel-{slug}", K, points=ds.values)], spec)
    return ExperimentResult(experiment=KERNEL, slug=slug, rows=rows, summary=table_summary(rows))


def run_synthetic_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """U L V^T inputs, one per decay mode, same ratios and samplers for each."""
    if spec.experiment != SYNTHETIC:
        raise ValueError(f"Expected a synthetic spec, got {spec.experiment}")

    cases = []
    for decay in spec.decays:
        M = synthetic_matrix(SyntheticSpec(n=spec.size, decay=decay, seed=spec.seed, rank=spec.rank))
        cases.append(_make_case(f"synthetic-{decay}", M))
        logger.info(f"Generated {spec.size}x{spec.size} synthetic matrix with {decay} decay")

    rows = run_cases(cases, spec)
    slug = slugify("-".join(spec.decays) + f"-{spec.size}")
    return ExperimentResult(experiment=SYNTHETIC, slug=slug, rows=rows, summary=table_summary(rows))


def run_singularity_experiment(spec: ExperimentSpec) -> ExperimentResult:
    """Repeated fixed-ratio runs; relates sigma_s(A_M) to the error on a log-log scale."""
    if spec.experiment != SINGULARITY:
        raise ValueError(f"Expected a singularity spec, got {spec.experiment}")

    cases = []
    for decay in spec.decays:
        M = synthetic_matrix(SyntheticSpec(n=spec.size, decay=decay, seed=spec.seed, rank=spec.rank))
        cases.append(_make_case(f"singularity-{decay}", M))

    rows = run_cases(cases, spec)
    slug = slugify("-".join(spec.decays) + f"-{spec.size}")
    summary = table_summary(rows)
    summary.update(singularity_summary(rows))
    return ExperimentResult(experiment=SINGULARITY, slug=slug, rows=rows, summary=summary)


def run_experiment(spec: ExperimentSpec, data_dir: Optional[Path] = None) -> ExperimentResult:
    if spec.experiment == KERNEL:
        return run_kernel_experiment(spec, data_dir)
    if spec.experiment == SYNTHETIC:
        return run_synthetic_experiment(spec)
    return run_singularity_experiment(spec)


def table_summary(rows: List[ResultRow]) -> Dict[str, Any]:
    total = len(rows)
    failed = sum(r.failed for r in rows)
    return {"rows": total, "failed": failed, "failure_rate": failed / total if total else 0.0}


def log_correlation(sigmas: List[float], errors: List[float]) -> Optional[float]:
    """Pearson correlation of (log sigma, log error); None when undefined."""
    if len(sigmas) < 2:
        return None
    x = np.log(np.asarray(sigmas, dtype=np.float64))
    y = np.log(np.asarray(errors, dtype=np.float64))
    if np.ptp(x) == 0 or np.ptp(y) == 0:
        return None
    r = stats.pearsonr(x, y)[0]
    return float(r) if math.isfinite(r) else None


def singularity_summary(rows: List[ResultRow]) -> Dict[str, Any]:
    """Pooled and per-sampler log-log correlations.

    Rows with zero sigma_s(A_M) or zero error have no logarithm; they are
    counted in `excluded` and left out.
    """
    usable = [r for r in rows if not r.failed and r.sigma_s_am is not None]
    points = [r for r in usable if r.sigma_s_am > 0 and r.error > 0]
    excluded = len(usable) - len(points)
    if excluded:
        logger.info(f"{excluded} rows with zero sigma_s(A_M) or zero error left out of the correlation")

    per_sampler = {}
    for sampler in sorted({r.sampler for r in rows}):
        mine = [r for r in points if r.sampler == sampler]
        per_sampler[sampler] = log_correlation([r.sigma_s_am for r in mine], [r.error for r in mine])

    return {
        "correlation": log_correlation([r.sigma_s_am for r in points], [r.error for r in points]),
        "per_sampler": per_sampler,
        "points": len(points),
        "excluded": excluded,
    }
