"""Closed-form error bounds and assumption predicates for Nystrom sampling.

Everything here is plain arithmetic on a SpectralSummary, except
summarize() and observed_error() which measure a concrete matrix.
"""

import logging
import math
from typing import Optional

import numpy as np

from src.bounds.models import (
    AssumptionReport,
    BoundEvaluation,
    BoundNotApplicable,
    SpectralSummary,
)
from src.linalg.core import (
    as_matrix,
    frobenius_norm,
    full_svd,
    sigma_k,
    singular_values,
    spectral_norm,
)
from src.linalg.models import DenseMatrix, IndexLike, SvdResult
from src.nystrom.models import NystromFactorization


logger = logging.getLogger(__name__)

GAMMA_REL_TOL: float = 1e-9

L2 = "l2"
FROBENIUS = "fro"


def beta_default(s: int, m: int, n: int) -> float:
    """sqrt(s (min(m, n) - s) + 1)."""
    if not 0 <= s <= min(m, n):
        raise ValueError(f"s={s} must lie in [0, min(m, n)={min(m, n)}]")
    return math.sqrt(s * (min(m, n) - s) + 1)


def measured_beta(G: DenseMatrix, S: DenseMatrix, rows: IndexLike, cols: IndexLike) -> float:
    """Smallest beta with sigma_s(G_A) >= sigma_s(G)/beta and the same for S."""
    rows = np.asarray(list(rows), dtype=np.intp)
    cols = np.asarray(list(cols), dtype=np.intp)
    s = G.shape[1]

    ratios = [1.0]
    for whole, part in ((G, G[rows, :]), (S, S[:, cols])):
        top = sigma_k(whole, s)
        bottom = sigma_k(part, s)
        if bottom == 0:
            return math.inf
        ratios.append(top / bottom)
    return max(ratios)


def sigma_s_alg(M: DenseMatrix, rows: IndexLike, cols: IndexLike, s: Optional[int] = None) -> float:
    """sigma_s of A_lg = X_A Y_A, the sample block of the top-s SVD component."""
    M = as_matrix(M)
    rows = np.asarray(list(rows), dtype=np.intp)
    cols = np.asarray(list(cols), dtype=np.intp)
    s = s or rows.shape[0]

    svd = full_svd(M)
    X = svd.U[:, :s] * svd.values[:s]
    Y = svd.V[:, :s].T
    return sigma_k(X[rows, :] @ Y[:, cols], s)


def summarize(
    M: DenseMatrix,
    rows: IndexLike,
    cols: IndexLike,
    worst_case: bool = False,
) -> SpectralSummary:
    """SpectralSummary from the exact truncated SVD (e_s = sigma_{s+1}, gamma = 1).

    beta is measured from the selected rows/cols unless worst_case is set,
    in which case the RRQR guarantee sqrt(s (min(m, n) - s) + 1) is used.
    """
    M = as_matrix(M)
    return summarize_from_svd(M, full_svd(M), rows, cols, worst_case=worst_case)


def summarize_from_svd(
    M: DenseMatrix,
    svd: SvdResult,
    rows: IndexLike,
    cols: IndexLike,
    worst_case: bool = False,
) -> SpectralSummary:
    """summarize() with a precomputed full SVD of M."""
    m, n = M.shape
    rows = np.asarray(list(rows), dtype=np.intp)
    cols = np.asarray(list(cols), dtype=np.intp)
    s = rows.shape[0]

    values = svd.values
    sigma_s1 = float(values[s]) if s < values.shape[0] else 0.0

    G = svd.U[:, :s] * values[:s]
    S = svd.V[:, :s].T

    if worst_case:
        beta = beta_default(s, m, n)
    else:
        beta = measured_beta(G, S, rows, cols)
        if not math.isfinite(beta):
            raise BoundNotApplicable("Selected rows or columns of the thin factors are singular")

    return SpectralSummary(
        sigma1=float(values[0]),
        sigma_s=float(values[s - 1]),
        sigma_s1=sigma_s1,
        sigma_s_AM=sigma_k(M[np.ix_(rows, cols)], s),
        sigma_s_Alg=sigma_k(G[rows, :] @ S[:, cols], s),
        e_s=sigma_s1,
        beta=beta,
        gamma=1.0,
        s=s,
        m=m,
        n=n,
    )


def theorem1_assumptions(
    ss: SpectralSummary,
    sigma_s_GS: float,
    sigma_s_G: float,
    sigma_s_S: float,
    sigma_s_GA: Optional[float] = None,
    sigma_s_SA: Optional[float] = None,
) -> AssumptionReport:
    """Evaluate the four non-singularity assumptions.

    (1) sigma_s(GS) > 0
    (2) sigma_s(G) sigma_s(S) = sigma_s(GS) / gamma, relative 1e-9
    (3) sigma_s(G_A) >= sigma_s(G)/beta and sigma_s(S_A) >= sigma_s(S)/beta
    (4) e_s < (sigma_s(M) - e_s) / (beta^2 gamma)
    """
    for name, value in (("sigma_s_GS", sigma_s_GS), ("sigma_s_G", sigma_s_G), ("sigma_s_S", sigma_s_S)):
        if value < 0:
            raise ValueError(f"{name} must be non-negative, got {value}")

    a1 = sigma_s_GS > 0

    product = sigma_s_G * sigma_s_S
    gamma_measured = sigma_s_GS / product if product > 0 else math.inf
    target = sigma_s_GS / ss.gamma
    a2 = a1 and abs(product - target) <= GAMMA_REL_TOL * target

    a3 = None
    if sigma_s_GA is not None and sigma_s_SA is not None:
        # relative slack for the rounding in sigma_s itself
        a3 = (
            sigma_s_GA * ss.beta >= sigma_s_G * (1 - 1e-12)
            and sigma_s_SA * ss.beta >= sigma_s_S * (1 - 1e-12)
        )

    a4 = ss.e_s < (ss.sigma_s - ss.e_s) / ss.k

    return AssumptionReport(a1=a1, a2=a2, a3=a3, a4=a4, gamma_measured=gamma_measured)


def lemma3_condition(ss: SpectralSummary) -> bool:
    """sigma_{s+1}(M) < (sigma_s(M) - e_s) / (beta^2 gamma) - e_s."""
    return ss.sigma_s1 < (ss.sigma_s - ss.e_s) / ss.k - ss.e_s


def lemma4_bound(ss: SpectralSummary) -> BoundEvaluation:
    """sigma_{s+1}/sigma_s(A_M) (sigma_1^2/sigma_s(A_lg) + 2 sigma_1 + sigma_{s+1})."""
    if ss.sigma_s1 == 0:
        return BoundEvaluation(value=0.0)
    if ss.sigma_s_AM == 0 or ss.sigma_s_Alg == 0:
        return BoundEvaluation(value=math.inf, finite=False)

    inner = ss.sigma1 ** 2 / ss.sigma_s_Alg + 2 * ss.sigma1 + ss.sigma_s1
    return BoundEvaluation(value=ss.sigma_s1 / ss.sigma_s_AM * inner)


def theorem2_bound(ss: SpectralSummary) -> BoundEvaluation:
    """Lemma-4 bound with sigma_s(A_M) and sigma_s(A_lg) replaced by their lower bounds.

    Raises BoundNotApplicable when sigma_s - (1 + k) e_s <= 0 or
    sigma_s - (1 + k) e_s - k sigma_{s+1} <= 0, where k = beta^2 gamma.
    """
    k = ss.k
    d1 = ss.sigma_s - (1 + k) * ss.e_s
    if d1 <= 0:
        raise BoundNotApplicable(
            f"sigma_s - (1 + beta^2 gamma) e_s = {d1:.3e} is not positive"
        )
    d2 = d1 - ss.sigma_s1 * k
    if d2 <= 0:
        raise BoundNotApplicable(
            f"sigma_s - (1 + beta^2 gamma) e_s - beta^2 gamma sigma_(s+1) = {d2:.3e} is not positive"
        )

    eigengap = ss.sigma_s1 * k / d1
    value = eigengap * (ss.sigma1 ** 2 * k / d2 + 2 * ss.sigma1 + ss.sigma_s1)
    return BoundEvaluation(value=value, finite=True, eigengap_factor=eigengap)


def lemma2_holds(A: DenseMatrix, E: DenseMatrix, slack: float = 1e-12) -> bool:
    """|sigma_k(A + E) - sigma_k(A)| <= ||E||_2 for every k."""
    A = as_matrix(A)
    E = as_matrix(E)

    diff = np.abs(singular_values(A + E) - singular_values(A))
    limit = spectral_norm(E)
    return bool(np.all(diff <= limit + slack * max(limit, spectral_norm(A), 1.0)))


def observed_error(M: DenseMatrix, f: NystromFactorization, norm: str = L2) -> float:
    """||M-hat - M|| in the requested norm.

    Only the C block differs, so the norm is taken of F A^+ B - C.
    """
    if norm not in (L2, FROBENIUS):
        raise ValueError(f"Invalid norm: {norm}. Expected 'l2' or 'fro'")

    p = f.partition
    if tuple(np.shape(M)) != (p.m, p.n):
        raise ValueError(f"Matrix shape {np.shape(M)} does not match factorization {(p.m, p.n)}")
    diff = f.approximate_block() - p.C
    return spectral_norm(diff) if norm == L2 else frobenius_norm(diff)
