"""Thin rank-s decompositions M ~ G S used as the Algorithm-1 front end."""

import logging
from typing import Optional

import numpy as np
import scipy.linalg as sla

from src.linalg.core import as_matrix, full_svd, sigma_k, spectral_norm
from src.linalg.models import DenseMatrix
from src.sampling.models import (
    DegenerateSamplingError,
    EXACT_SVD,
    InvalidSampleSizeError,
    LINEAR_TIME_SVD,
    ThinDecomposition,
)
from src.sampling.seeds import make_rng


logger = logging.getLogger(__name__)

# Above this size e_s comes from power iteration instead of a dense SVD.
EXACT_RESIDUAL_LIMIT: int = 2000
POWER_ITERATIONS: int = 50
POWER_TOL: float = 1e-6


def estimate_residual_norm(
    M: DenseMatrix,
    G: DenseMatrix,
    S: DenseMatrix,
    seed: int = 0,
    exact_limit: int = EXACT_RESIDUAL_LIMIT,
    n_iter: int = POWER_ITERATIONS,
    tol: float = POWER_TOL,
) -> float:
    """||M - G S||_2, exact up to exact_limit rows/cols, power method beyond."""
    m, n = M.shape
    if max(m, n) <= exact_limit:
        return spectral_norm(M - G @ S)

    def apply(x):
        return M @ x - G @ (S @ x)

    def apply_t(y):
        return M.T @ y - S.T @ (G.T @ y)

    x = make_rng(seed).standard_normal(n)
    x /= np.linalg.norm(x)
    estimate = 0.0
    for it in range(n_iter):
        y = apply(x)
        new_estimate = float(np.linalg.norm(y))
        x = apply_t(y)
        norm_x = np.linalg.norm(x)
        if norm_x == 0:
            return new_estimate
        x /= norm_x
        if estimate and abs(new_estimate - estimate) <= tol * new_estimate:
            logger.debug(f"Power iteration converged after {it + 1} steps")
            return new_estimate
        estimate = new_estimate
    return estimate


def measured_gamma(G: DenseMatrix, S: DenseMatrix) -> float:
    """sigma_s(G S) / (sigma_s(G) sigma_s(S)), never below 1; inf when degenerate."""
    s = G.shape[1]
    sg = sigma_k(G, s)
    ss = sigma_k(S, s)
    if sg * ss == 0:
        return float("inf")

    # sigma(G S) = sigma(R S) with G = Q R
    R = sla.qr(G, mode="r")[0][:s, :]
    sgs = sigma_k(R @ S, s)
    return max(sgs / (sg * ss), 1.0)


def thin_svd(M: DenseMatrix, s: int) -> ThinDecomposition:
    """G = U_s Sigma_s, S = V_s^T; e_s = sigma_{s+1}(M) and gamma = 1."""
    M = as_matrix(M)
    m, n = M.shape
    if not 1 <= s <= min(m, n):
        raise InvalidSampleSizeError(f"Sample size {s} must lie in [1, {min(m, n)}]")

    svd = full_svd(M)
    G = svd.U[:, :s] * svd.values[:s]
    S = np.ascontiguousarray(svd.V[:, :s].T)
    e_s = float(svd.values[s]) if s < svd.values.shape[0] else 0.0
    return ThinDecomposition(G=G, S=S, e_s=e_s, gamma=1.0, method=EXACT_SVD)


def linear_time_svd(
    M: DenseMatrix,
    s: int,
    c: Optional[int] = None,
    seed: int = 0,
    probabilities: str = "norm",
) -> ThinDecomposition:
    """Column-sampling SVD: G = U_s of the rescaled sample, S = U_s^T M.

    c columns are drawn with replacement, with probability proportional to
    squared column norm (or uniformly), and rescaled by 1/sqrt(c p_j).
    """
    M = as_matrix(M)
    m, n = M.shape
    if c is None:
        c = min(n, 10 * s)
    if not 1 <= s <= min(m, n):
        raise InvalidSampleSizeError(f"Sample size {s} must lie in [1, {min(m, n)}]")
    if not s <= c <= n:
        raise InvalidSampleSizeError(f"Column count c={c} must satisfy s={s} <= c <= n={n}")

    col_mass = np.einsum("ij,ij->j", M, M)
    total = float(col_mass.sum())
    if total == 0:
        raise DegenerateSamplingError("All columns are zero, nothing to sample")

    if probabilities == "uniform":
        p = np.full(n, 1.0 / n)
    elif probabilities == "norm":
        p = col_mass / total
    else:
        raise ValueError(f"Invalid probabilities: {probabilities}. Expected 'norm' or 'uniform'")

    rng = make_rng(seed)
    idx = rng.choice(n, size=c, replace=True, p=p)
    C = M[:, idx] / np.sqrt(c * p[idx])

    U_C = full_svd(C).U
    if U_C.shape[1] < s:
        raise DegenerateSamplingError(f"Sampled matrix has only {U_C.shape[1]} singular vectors, need {s}")

    G = np.ascontiguousarray(U_C[:, :s])
    S = G.T @ M

    e_s = estimate_residual_norm(M, G, S, seed=seed)
    gamma = measured_gamma(G, S)
    logger.debug(f"LinearTimeSVD c={c} s={s}: e_s={e_s:.3e} gamma={gamma:.3f}")
    return ThinDecomposition(G=G, S=S, e_s=e_s, gamma=gamma, method=LINEAR_TIME_SVD)
