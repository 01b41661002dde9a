"""Unit tests for the closed-form error bounds."""

import math

import numpy as np
import pytest

from src.bounds import (
    AssumptionReport,
    BoundNotApplicable,
    SpectralSummary,
    beta_default,
    lemma2_holds,
    lemma3_condition,
    lemma4_bound,
    measured_beta,
    observed_error,
    sigma_s_alg,
    summarize,
    theorem1_assumptions,
    theorem2_bound,
)
from src.linalg import partition
from src.nystrom import factorize
from src.sampling import SamplerConfig, derive_seed, make_rng, select_sample, thin_svd


def _summary(**overrides):
    values = dict(
        sigma1=1.0,
        sigma_s=0.5,
        sigma_s1=1e-3,
        sigma_s_AM=0.2,
        sigma_s_Alg=0.25,
        e_s=1e-3,
        beta=1.0,
        gamma=1.0,
        s=3,
        m=10,
        n=8,
    )
    values.update(overrides)
    return SpectralSummary(**values)


@pytest.fixture
def gapped_matrix(rng):
    """30x20 matrix with a wide gap after the fourth singular value."""
    U, _ = np.linalg.qr(rng.standard_normal((30, 20)))
    V, _ = np.linalg.qr(rng.standard_normal((20, 20)))
    values = np.concatenate([[1.0, 0.8, 0.6, 0.5], 1e-6 * 0.5 ** np.arange(16)])
    return (U * values) @ V.T


class TestSpectralSummary:
    """Test SpectralSummary validation."""

    def test_k_property(self):
        """Test k = beta^2 gamma."""
        assert _summary(beta=2.0, gamma=1.5).k == pytest.approx(6.0)

    def test_order_violation(self):
        """Test sigma_s above sigma_1 is refused."""
        with pytest.raises(ValueError, match="out of order"):
            _summary(sigma_s=2.0)

    def test_negative_value(self):
        """Test negative inputs are refused."""
        with pytest.raises(ValueError, match="non-negative"):
            _summary(e_s=-1.0)

    def test_beta_below_one(self):
        """Test beta < 1 is refused."""
        with pytest.raises(ValueError, match="beta"):
            _summary(beta=0.5)

    def test_non_numeric(self):
        """Test non-numeric inputs are refused."""
        with pytest.raises(TypeError, match="Expected numeric"):
            _summary(sigma1="1.0")


class TestBeta:
    """Test beta helpers."""

    def test_beta_default(self):
        """Test sqrt(s (min(m, n) - s) + 1)."""
        assert beta_default(3, 10, 8) == pytest.approx(math.sqrt(16))
        assert beta_default(8, 10, 8) == pytest.approx(1.0)

    def test_beta_default_invalid(self):
        """Test s above min(m, n) is refused."""
        with pytest.raises(ValueError):
            beta_default(9, 10, 8)

    def test_measured_beta_singular(self):
        """Test a singular row selection gives infinite beta."""
        G = np.array([[1.0, 0.0], [0.0, 1.0], [0.0, 0.0]])
        S = np.eye(2)

        assert measured_beta(G, S, [0, 2], [0, 1]) == math.inf

    def test_measured_beta_is_worst_side(self, rect_matrix):
        """Test beta is the larger of the two sigma_s shrink factors."""
        thin = thin_svd(rect_matrix, 3)
        rows, cols = [0, 7, 12], [2, 5, 11]
        G_ratio = np.linalg.svd(thin.G, compute_uv=False)[2] / np.linalg.svd(thin.G[rows], compute_uv=False)[2]
        S_ratio = np.linalg.svd(thin.S, compute_uv=False)[2] / np.linalg.svd(thin.S[:, cols], compute_uv=False)[2]

        assert measured_beta(thin.G, thin.S, rows, cols) == pytest.approx(max(G_ratio, S_ratio, 1.0))


class TestLemmas:
    """Test lemma predicates and bounds."""

    def test_lemma3_holds_with_gap(self):
        """Test a wide gap satisfies the non-singularity condition."""
        assert lemma3_condition(_summary())

    def test_lemma3_fails_without_gap(self):
        """Test a flat spectrum violates the condition."""
        assert not lemma3_condition(_summary(sigma_s1=0.5, e_s=0.4))

    def test_lemma4_zero_tail(self):
        """Test sigma_{s+1} = 0 gives a zero bound."""
        assert lemma4_bound(_summary(sigma_s1=0.0, e_s=0.0)).value == 0.0

    def test_lemma4_singular_sample(self):
        """Test a singular sample gives an infinite bound."""
        result = lemma4_bound(_summary(sigma_s_AM=0.0))

        assert result.value == math.inf
        assert not result.finite

    def test_lemma4_value(self):
        """Test the closed form."""
        ss = _summary()
        expected = 1e-3 / 0.2 * (1.0 / 0.25 + 2.0 + 1e-3)

        assert lemma4_bound(ss).value == pytest.approx(expected)

    def test_lemma2_weyl(self, rng):
        """Test singular values move by at most ||E||_2."""
        A = rng.standard_normal((8, 6))
        E = 1e-3 * rng.standard_normal((8, 6))

        assert lemma2_holds(A, E)


class TestTheorem2:
    """Test the non-singularity error bound."""

    def test_closed_form(self):
        """Test the value against a hand evaluation."""
        ss = _summary()
        d1 = 0.5 - 2 * 1e-3
        d2 = d1 - 1e-3
        gap = 1e-3 / d1
        result = theorem2_bound(ss)

        assert result.finite
        assert result.eigengap_factor == pytest.approx(gap)
        assert result.value == pytest.approx(gap * (1.0 / d2 + 2.0 + 1e-3))

    def test_not_applicable_large_residual(self):
        """Test e_s too large for the first denominator."""
        with pytest.raises(BoundNotApplicable, match="not positive"):
            theorem2_bound(_summary(e_s=0.3, sigma_s1=0.3))

    def test_not_applicable_second_denominator(self):
        """Test sigma_{s+1} too large for the second denominator."""
        with pytest.raises(BoundNotApplicable, match="sigma_\\(s\\+1\\)"):
            theorem2_bound(_summary(e_s=0.0, sigma_s1=0.48, beta=1.05))

    def test_bound_holds_for_algorithm1(self, gapped_matrix):
        """Test the observed L2 error stays below both bounds."""
        sel = select_sample(gapped_matrix, 4, SamplerConfig())
        assert sel.ok

        error = observed_error(gapped_matrix, factorize(partition(gapped_matrix, sel.rows, sel.cols)))
        ss = summarize(gapped_matrix, sel.rows, sel.cols)

        assert error <= lemma4_bound(ss).value
        assert error <= theorem2_bound(ss).value

    def test_monotone_in_tail_and_residual(self):
        """Test the bound grows with sigma_{s+1} and with e_s."""
        by_tail = [theorem2_bound(_summary(sigma_s1=t)).value for t in (1e-4, 1e-3, 5e-3, 1e-2)]
        by_residual = [theorem2_bound(_summary(e_s=e)).value for e in (0.0, 1e-4, 1e-3, 1e-2)]

        assert np.all(np.diff(by_tail) > 0)
        assert np.all(np.diff(by_residual) > 0)

    def test_bound_holds_on_many_instances(self):
        """Test the observed L2 error stays below the bound on 200 gapped matrices."""
        for t in range(200):
            rng = make_rng(derive_seed(2, t))
            m, n = 30 + t % 11, 20 + t % 7
            U, _ = np.linalg.qr(rng.standard_normal((m, n)))
            V, _ = np.linalg.qr(rng.standard_normal((n, n)))
            head = np.sort(rng.uniform(0.5, 1.0, 4))[::-1]
            tail = 10.0 ** rng.uniform(-7.0, -5.0) * 0.5 ** np.arange(n - 4)
            M = (U * np.concatenate([head, tail])) @ V.T

            sel = select_sample(M, 4, SamplerConfig())
            bound = theorem2_bound(summarize(M, sel.rows, sel.cols)).value
            error = observed_error(M, factorize(partition(M, sel.rows, sel.cols)))

            assert error <= bound, t


class TestSummaries:
    """Test summarize, sigma_s_alg and the assumption report."""

    def test_summarize_exact_thin(self, gapped_matrix):
        """Test summarize reads the spectrum and the sample."""
        sel = select_sample(gapped_matrix, 4, SamplerConfig())
        ss = summarize(gapped_matrix, sel.rows, sel.cols)

        assert ss.sigma1 == pytest.approx(1.0)
        assert ss.sigma_s == pytest.approx(0.5)
        assert ss.e_s == ss.sigma_s1
        assert ss.gamma == 1.0
        assert ss.sigma_s_AM == pytest.approx(sel.sigma_s_A)
        assert ss.sigma_s_Alg == pytest.approx(sigma_s_alg(gapped_matrix, sel.rows, sel.cols))

    def test_summarize_worst_case(self, gapped_matrix):
        """Test worst_case uses the RRQR beta."""
        ss = summarize(gapped_matrix, [0, 1, 2, 3], [0, 1, 2, 3], worst_case=True)

        assert ss.beta == pytest.approx(beta_default(4, 30, 20))

    def test_theorem1_assumptions_exact_factors(self, gapped_matrix):
        """Test exact SVD factors satisfy the first three assumptions."""
        sel = select_sample(gapped_matrix, 4, SamplerConfig())
        ss = summarize(gapped_matrix, sel.rows, sel.cols)
        d = sel.diagnostics
        thin = thin_svd(gapped_matrix, 4)
        sigma_s_GS = float(np.linalg.svd(thin.product(), compute_uv=False)[3])

        report = theorem1_assumptions(
            ss, sigma_s_GS, d["sigma_s_G"], d["sigma_s_S"], d["sigma_s_GA"], d["sigma_s_SA"]
        )

        assert isinstance(report, AssumptionReport)
        assert report.a1
        assert report.a2
        assert report.a3
        assert report.a4
        assert report.all_hold
        assert report.gamma_measured == pytest.approx(1.0, rel=1e-9)

    def test_theorem1_without_selection(self):
        """Test a3 is unknown without selection diagnostics."""
        report = theorem1_assumptions(_summary(), 0.5, 0.5, 1.0)

        assert report.a3 is None
        assert report.all_hold

    def test_theorem1_zero_product(self):
        """Test sigma_s(GS) = 0 fails the first assumption."""
        report = theorem1_assumptions(_summary(), 0.0, 0.5, 1.0)

        assert not report.a1
        assert not report.all_hold


class TestObservedError:
    """Test observed_error."""

    def test_norms(self, rect_matrix):
        """Test the Frobenius error is at least the spectral error."""
        f = factorize(partition(rect_matrix, [0, 5, 9], [1, 4, 7]))

        assert observed_error(rect_matrix, f, "fro") >= observed_error(rect_matrix, f, "l2")

    def test_exact_for_rank_s(self, low_rank_matrix):
        """Test a rank-s matrix has zero error from a nonsingular sample."""
        f = factorize(partition(low_rank_matrix, [0, 5, 10, 20], [1, 4, 9, 15]))

        assert observed_error(low_rank_matrix, f) < 1e-9

    def test_shape_mismatch(self, rect_matrix):
        """Test a factorization of another matrix is refused."""
        f = factorize(partition(rect_matrix, [0], [0]))

        with pytest.raises(ValueError, match="does not match"):
            observed_error(np.zeros((4, 4)), f)

    def test_invalid_norm(self, rect_matrix):
        """Test unknown norms are refused."""
        f = factorize(partition(rect_matrix, [0], [0]))

        with pytest.raises(ValueError, match="Invalid norm"):
            observed_error(rect_matrix, f, "nuc")
