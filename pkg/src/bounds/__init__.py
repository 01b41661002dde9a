"""Bounds package - closed-form error bounds and assumption checks."""

from src.bounds.bounds import (
    FROBENIUS,
    L2,
    beta_default,
    lemma2_holds,
    lemma3_condition,
    lemma4_bound,
    measured_beta,
    observed_error,
    sigma_s_alg,
    summarize,
    summarize_from_svd,
    theorem1_assumptions,
    theorem2_bound,
)
from src.bounds.models import (
    AssumptionReport,
    BoundEvaluation,
    BoundNotApplicable,
    SpectralSummary,
)
