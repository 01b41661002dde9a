"""Sub-sample selectors: Algorithm 1, random, ICD, k-means, and the Monte-Carlo wrapper."""

import logging
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import Dict, List, Optional

import numpy as np
from scipy.cluster.vq import kmeans2
from scipy.spatial.distance import cdist

from src.bounds.bounds import beta_default
from src.linalg.core import as_matrix, default_tolerance, numerical_rank, sigma_k, spectral_norm
from src.linalg.models import DenseMatrix, IndexSet, LinalgError
from src.sampling.models import (
    ALGORITHM1,
    ALGORITHM1_FAILURE,
    EXACT_SVD,
    ICD,
    InvalidSampleSizeError,
    KMEANS,
    PsdViolationError,
    RANDOM,
    SampleSelection,
    SamplerConfig,
    SamplingError,
    STATUS_FAILED,
    STATUS_OK,
)
from src.sampling.rrqr import rrqr_select
from src.sampling.seeds import derive_seed, make_rng
from src.sampling.thin import linear_time_svd, thin_svd


logger = logging.getLogger(__name__)

PSD_TOL: float = 1e-10


def _finish(
    M: DenseMatrix,
    rows: List[int],
    cols: List[int],
    method: str,
    seed: Optional[int] = None,
    e_s: Optional[float] = None,
    gamma: Optional[float] = None,
    diagnostics: Optional[Dict] = None,
) -> SampleSelection:
    """Extract A_M, measure sigma_s(A_M) and decide the status."""
    m, n = M.shape
    s = len(rows)
    I = IndexSet(tuple(rows), m)
    J = IndexSet(tuple(cols), n)

    A = M[np.ix_(I.as_array(), J.as_array())]
    sigma = sigma_k(A, s) if s else 0.0

    status, reason = STATUS_OK, None
    if s == 0 or sigma <= default_tolerance(A):
        status = STATUS_FAILED
        reason = f"Sample block is singular (sigma_s(A_M) = {sigma:.3e})"

    return SampleSelection(
        rows=I,
        cols=J,
        sigma_s_A=sigma,
        beta_bound=beta_default(s, m, n),
        e_s=e_s,
        gamma=gamma,
        status=status,
        reason=reason,
        method=method,
        seed=seed,
        diagnostics=dict(diagnostics or {}),
    )


def select_sample(M: DenseMatrix, s: int, cfg: SamplerConfig) -> SampleSelection:
    """Algorithm 1: thin decomposition, RRQR on G^T and on S, rank check.

    A failed rank check is reported through status, not raised.
    """
    M = as_matrix(M)
    m, n = M.shape
    cfg.validate_for(m, n, s)

    if cfg.thin_front_end == EXACT_SVD:
        thin = thin_svd(M, s)
    else:
        thin = linear_time_svd(
            M,
            s,
            c=cfg.columns_for(n, s),
            seed=cfg.seed,
            probabilities=cfg.column_probabilities,
        )

    budget = cfg.swap_budget_for(s)
    row_piv = rrqr_select(thin.G.T, s, swap_budget=budget)
    col_piv = rrqr_select(thin.S, s, swap_budget=budget)

    G_A = thin.G[row_piv.indices.as_array(), :]
    S_A = thin.S[:, col_piv.indices.as_array()]

    diagnostics = {
        "front_end": thin.method,
        "sigma_s_G": sigma_k(thin.G, s),
        "sigma_s_S": sigma_k(thin.S, s),
        "sigma_s_GA": sigma_k(G_A, s),
        "sigma_s_SA": sigma_k(S_A, s),
        "row_swaps": row_piv.swaps,
        "col_swaps": col_piv.swaps,
        "rank_deficient": row_piv.rank_deficient or col_piv.rank_deficient,
    }

    rank_GA = numerical_rank(G_A, cfg.rank_threshold)
    rank_SA = numerical_rank(S_A, cfg.rank_threshold)
    if rank_GA < s or rank_SA < s:
        logger.info(f"Algorithm 1 rank check failed for s={s}: rank(G_A)={rank_GA}, rank(S_A)={rank_SA}")
        diagnostics.update({"rank_GA": rank_GA, "rank_SA": rank_SA})
        return SampleSelection(
            rows=row_piv.indices,
            cols=col_piv.indices,
            sigma_s_A=0.0,
            beta_bound=beta_default(s, m, n),
            e_s=thin.e_s,
            gamma=thin.gamma,
            status=STATUS_FAILED,
            reason=ALGORITHM1_FAILURE,
            method=ALGORITHM1,
            seed=cfg.seed,
            diagnostics=diagnostics,
        )

    return _finish(
        M,
        list(row_piv.indices),
        list(col_piv.indices),
        ALGORITHM1,
        seed=cfg.seed,
        e_s=thin.e_s,
        gamma=thin.gamma,
        diagnostics=diagnostics,
    )


def random_sample(
    m: int,
    n: int,
    s: int,
    seed: int,
    symmetric: bool = False,
    matrix: Optional[DenseMatrix] = None,
) -> SampleSelection:
    """Uniform draw without replacement; J = I when symmetric.

    Without a matrix the selection carries sigma_s_A = NaN.
    """
    if not 1 <= s <= min(m, n):
        raise InvalidSampleSizeError(f"Sample size {s} must lie in [1, {min(m, n)}]")
    if symmetric and m != n:
        raise InvalidSampleSizeError(f"Symmetric sampling needs a square matrix, got {m}x{n}")

    rng = make_rng(seed)
    rows = [int(i) for i in rng.choice(m, size=s, replace=False)]
    cols = list(rows) if symmetric else [int(j) for j in rng.choice(n, size=s, replace=False)]

    if matrix is not None:
        return _finish(as_matrix(matrix), rows, cols, RANDOM, seed=seed)

    return SampleSelection(
        rows=IndexSet(tuple(rows), m),
        cols=IndexSet(tuple(cols), n),
        sigma_s_A=float("nan"),
        beta_bound=beta_default(s, m, n),
        method=RANDOM,
        seed=seed,
    )


def icd_sample(M: DenseMatrix, s: int, trace_tol: Optional[float] = None) -> SampleSelection:
    """Pivoted incomplete Cholesky for s steps; pivot = largest diagonal residual.

    With trace_tol set, stops early once the residual trace drops to it.
    """
    M = as_matrix(M)
    n = M.shape[0]
    if M.shape[0] != M.shape[1]:
        raise PsdViolationError(f"ICD needs a square matrix, got {M.shape}")
    if not 1 <= s <= n:
        raise InvalidSampleSizeError(f"Sample size {s} must lie in [1, {n}]")
    scale = float(np.max(np.abs(M))) if M.size else 0.0
    if np.max(np.abs(M - M.T)) > PSD_TOL * max(scale, 1.0):
        raise PsdViolationError("ICD needs a symmetric matrix")

    d = np.diag(M).copy()
    L = np.zeros((n, s))
    chosen = np.zeros(n, dtype=bool)
    pivots: List[int] = []
    norm_M = None

    for k in range(s):
        residual = np.where(chosen, -np.inf, d)
        if np.min(d[~chosen]) < 0:
            if norm_M is None:
                norm_M = spectral_norm(M)
            if np.min(d[~chosen]) < -PSD_TOL * norm_M:
                raise PsdViolationError(
                    f"Negative diagonal residual {float(np.min(d[~chosen])):.3e} at step {k}"
                )

        if trace_tol is not None and float(np.sum(np.clip(d[~chosen], 0, None))) <= trace_tol:
            logger.info(f"ICD stopped after {k} steps at residual trace tolerance {trace_tol}")
            break

        i = int(np.argmax(residual))
        pivots.append(i)
        chosen[i] = True

        if d[i] > 0:
            L[:, k] = (M[:, i] - L[:, :k] @ L[i, :k]) / np.sqrt(d[i])
            d -= L[:, k] ** 2
        d[i] = 0.0

    residual_trace = float(np.sum(np.clip(d[~chosen], 0, None)))
    return _finish(
        M,
        pivots,
        list(pivots),
        ICD,
        diagnostics={"residual_trace": residual_trace, "steps": len(pivots)},
    )


def _lloyd(X: np.ndarray, s: int, iters: int, rng: np.random.Generator) -> np.ndarray:
    """k-means++ seeded Lloyd run; empty clusters are reseeded at the farthest point."""
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UserWarning)
        centers, labels = kmeans2(X, s, iter=iters, minit="++", missing="warn", seed=rng)
        for _ in range(s):
            empty = np.flatnonzero(np.bincount(labels, minlength=s) == 0)
            if empty.size == 0:
                break
            gap = np.min(cdist(X, centers, "sqeuclidean"), axis=1)
            centers[empty] = X[np.argsort(-gap, kind="stable")[:empty.size]]
            logger.debug(f"k-means: reseeded {empty.size} empty cluster(s)")
            centers, labels = kmeans2(X, centers, iter=iters, minit="matrix", missing="warn")
    return centers


def kmeans_sample(
    points: np.ndarray,
    s: int,
    iters: int = 100,
    seed: int = 0,
    matrix: Optional[DenseMatrix] = None,
    restarts: int = 10,
) -> SampleSelection:
    """k-means++ seeded Lloyd runs; pick the data point nearest each centroid of the best run.

    Each restart draws its own stream from `seed`; the run with the lowest
    inertia wins. Duplicates are replaced by the next-nearest unused point.
    """
    X = as_matrix(points)
    n = X.shape[0]
    if not 1 <= s <= n:
        raise InvalidSampleSizeError(f"Cannot pick {s} centers from {n} points")
    if restarts < 1:
        raise ValueError(f"restarts must be >= 1, got {restarts}")

    centers = None
    best_inertia = np.inf
    for r in range(restarts):
        candidate = _lloyd(X, s, iters, make_rng(derive_seed(seed, r)))
        inertia = float(np.sum(np.min(cdist(X, candidate, "sqeuclidean"), axis=1)))
        if inertia < best_inertia:
            centers, best_inertia = candidate, inertia
    logger.debug(f"k-means: best inertia {best_inertia:.4g} over {restarts} restarts")

    dist = cdist(centers, X, "sqeuclidean")
    used = np.zeros(n, dtype=bool)
    picks: List[int] = []
    for j in range(s):
        for idx in np.argsort(dist[j], kind="stable"):
            if not used[idx]:
                used[idx] = True
                picks.append(int(idx))
                break

    if matrix is not None:
        return _finish(as_matrix(matrix), picks, list(picks), KMEANS, seed=seed)

    return SampleSelection(
        rows=IndexSet(tuple(picks), n),
        cols=IndexSet(tuple(picks), n),
        sigma_s_A=float("nan"),
        beta_bound=beta_default(s, n, n),
        method=KMEANS,
        seed=seed,
    )


def run_sampler(
    M: DenseMatrix,
    s: int,
    cfg: SamplerConfig,
    seed: Optional[int] = None,
    points: Optional[np.ndarray] = None,
) -> SampleSelection:
    """Run cfg.method once. Library failures come back as a failed selection."""
    M = as_matrix(M)
    m, n = M.shape
    seed = cfg.seed if seed is None else int(seed)

    try:
        if cfg.method == ALGORITHM1:
            return select_sample(M, s, replace(cfg, seed=seed))
        if cfg.method == RANDOM:
            return random_sample(m, n, s, seed, symmetric=cfg.symmetric, matrix=M)
        if cfg.method == ICD:
            return icd_sample(M, s, trace_tol=cfg.icd_trace_tol)
        if cfg.method == KMEANS:
            if points is None:
                raise ValueError("k-means sampling needs the raw data points")
            return kmeans_sample(
                points, s, iters=cfg.kmeans_iters, seed=seed, matrix=M, restarts=cfg.kmeans_restarts
            )
    except (SamplingError, LinalgError) as e:
        logger.warning(f"{cfg.method} sampler failed for s={s}: {e}")
        return SampleSelection(
            rows=None,
            cols=None,
            sigma_s_A=0.0,
            beta_bound=beta_default(s, m, n) if s <= min(m, n) else 1.0,
            status=STATUS_FAILED,
            reason=str(e),
            method=cfg.method,
            seed=seed,
        )
    raise ValueError(f"Unknown sampler method: {cfg.method}")


def monte_carlo_select(
    M: DenseMatrix,
    s: int,
    cfg: SamplerConfig,
    trials: int,
    points: Optional[np.ndarray] = None,
) -> SampleSelection:
    """Best of `trials` runs by sigma_s(A_M); ties go to the lowest trial index."""
    if trials < 1:
        raise ValueError(f"trials must be >= 1, got {trials}")
    M = as_matrix(M)

    seeds = [derive_seed(cfg.seed, t) for t in range(trials)]
    with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
        results = list(pool.map(lambda sd: run_sampler(M, s, cfg, seed=sd, points=points), seeds))

    best_index = None
    for t, sel in enumerate(results):
        if not sel.ok:
            continue
        if best_index is None or sel.sigma_s_A > results[best_index].sigma_s_A:
            best_index = t

    sigmas = [r.sigma_s_A for r in results]
    if best_index is None:
        reasons = [f"trial {t}: {r.reason}" for t, r in enumerate(results)]
        m, n = M.shape
        return SampleSelection(
            rows=None,
            cols=None,
            sigma_s_A=0.0,
            beta_bound=beta_default(s, m, n) if s <= min(m, n) else 1.0,
            status=STATUS_FAILED,
            reason="All trials failed: " + "; ".join(reasons),
            method=cfg.method,
            seed=cfg.seed,
            diagnostics={"trial_reasons": reasons, "trial_sigmas": sigmas},
        )

    best = results[best_index]
    diagnostics = dict(best.diagnostics)
    diagnostics.update({"trial": best_index, "trial_sigmas": sigmas})
    return replace(best, diagnostics=diagnostics)
