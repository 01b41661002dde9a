"""Unit tests for sub-sample selection."""

import itertools

import numpy as np
import pytest
from scipy import stats

from src.bounds import observed_error
from src.data import SyntheticSpec, gaussian_blobs, synthetic_matrix
from src.linalg import numerical_rank, partition, sigma_k, singular_values, spectral_norm
from src.nystrom import factorize, reconstruct
from src.sampling import (
    ALGORITHM1_FAILURE,
    DegenerateSamplingError,
    InvalidSampleSizeError,
    PsdViolationError,
    SampleSelection,
    SamplerConfig,
    derive_seed,
    estimate_residual_norm,
    icd_sample,
    kmeans_sample,
    linear_time_svd,
    make_rng,
    measured_gamma,
    monte_carlo_select,
    random_sample,
    rrqr_select,
    run_sampler,
    select_sample,
    thin_svd,
)


class TestSeeds:
    """Test seed derivation."""

    def test_derive_seed_is_stable(self):
        """Test the same keys give the same seed."""
        assert derive_seed(7, 3) == derive_seed(7, 3)

    def test_derive_seed_separates_streams(self):
        """Test different trials and masters give different seeds."""
        seeds = {derive_seed(0, t) for t in range(50)}

        assert len(seeds) == 50
        assert derive_seed(1, 0) != derive_seed(0, 0)
        assert all(0 <= s < 2**64 for s in seeds)

    def test_make_rng_reproducible(self):
        """Test PCG64 streams repeat for equal seeds."""
        a = make_rng(5).standard_normal(4)
        b = make_rng(5).standard_normal(4)

        assert np.array_equal(a, b)


class TestThinDecompositions:
    """Test thin_svd, linear_time_svd and residual helpers."""

    def test_thin_svd_is_optimal(self, rect_matrix):
        """Test e_s equals sigma_{s+1} and gamma is 1."""
        thin = thin_svd(rect_matrix, 5)

        assert thin.s == 5
        assert thin.gamma == 1.0
        assert thin.e_s == pytest.approx(0.5 ** 5, rel=1e-10)
        assert spectral_norm(rect_matrix - thin.product()) == pytest.approx(thin.e_s, rel=1e-8)

    def test_linear_time_svd_shapes(self, rect_matrix):
        """Test G is m x s with orthonormal columns and S is s x n."""
        thin = linear_time_svd(rect_matrix, 4, seed=3)

        assert thin.G.shape == (30, 4)
        assert thin.S.shape == (4, 20)
        assert np.allclose(thin.G.T @ thin.G, np.eye(4), atol=1e-10)
        assert thin.method == "linear_time_svd"

    def test_linear_time_svd_not_better_than_optimal(self, rect_matrix):
        """Test e_s is never below sigma_{s+1}(M)."""
        thin = linear_time_svd(rect_matrix, 4, seed=3)

        assert thin.e_s >= sigma_k(rect_matrix, 5) * (1 - 1e-10)
        assert thin.gamma >= 1.0

    def test_linear_time_svd_reproducible(self, rect_matrix):
        """Test equal seeds draw the same columns."""
        a = linear_time_svd(rect_matrix, 3, seed=11)
        b = linear_time_svd(rect_matrix, 3, seed=11)

        assert np.array_equal(a.G, b.G)

    def test_linear_time_svd_uniform(self, rect_matrix):
        """Test uniform column probabilities are accepted."""
        thin = linear_time_svd(rect_matrix, 3, seed=1, probabilities="uniform")

        assert thin.G.shape == (30, 3)

    def test_linear_time_svd_column_count(self, rect_matrix):
        """Test c below s is refused."""
        with pytest.raises(InvalidSampleSizeError, match="Column count"):
            linear_time_svd(rect_matrix, 5, c=3)

    def test_linear_time_svd_zero_matrix(self):
        """Test a zero matrix has nothing to sample."""
        with pytest.raises(DegenerateSamplingError, match="zero"):
            linear_time_svd(np.zeros((6, 5)), 2)

    def test_power_iteration_matches_exact(self, rect_matrix):
        """Test the power-method residual agrees with the dense one."""
        thin = thin_svd(rect_matrix, 3)
        exact = estimate_residual_norm(rect_matrix, thin.G, thin.S)
        approx = estimate_residual_norm(rect_matrix, thin.G, thin.S, exact_limit=0)

        assert approx == pytest.approx(exact, rel=1e-4)

    def test_measured_gamma_of_svd_factors(self, rect_matrix):
        """Test exact SVD factors give gamma = 1."""
        thin = thin_svd(rect_matrix, 4)

        assert measured_gamma(thin.G, thin.S) == pytest.approx(1.0, abs=1e-8)


class TestRrqr:
    """Test rank-revealing QR selection."""

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_selection_bound(self, seed):
        """Test sigma_s(A1) >= sigma_s(A) / sqrt(s (k - s) + 1)."""
        A = make_rng(seed).standard_normal((4, 15))
        piv = rrqr_select(A, 4)
        A1 = A[:, piv.indices.as_array()]

        beta = np.sqrt(4 * (15 - 4) + 1)
        assert sigma_k(A1, 4) >= sigma_k(A, 4) / beta
        assert not piv.rank_deficient

    def test_selection_bound_many_seeds(self):
        """Test the sigma_s guarantee holds on 500 seeded wide matrices."""
        beta = np.sqrt(4 * (15 - 4) + 1)
        for t in range(500):
            A = make_rng(derive_seed(500, t)).standard_normal((4, 15))
            piv = rrqr_select(A, 4)

            assert not piv.budget_exhausted, t
            assert sigma_k(A[:, piv.indices.as_array()], 4) >= sigma_k(A, 4) / beta, t

    def test_volume_close_to_largest_minor(self):
        """Test |det A1| is within sqrt(s (k - s) + 1) of the best of all 15 column pairs."""
        factor = np.sqrt(2 * (6 - 2) + 1)
        for t in range(200):
            A = make_rng(derive_seed(6, t)).standard_normal((2, 6))
            chosen = abs(np.linalg.det(A[:, rrqr_select(A, 2).indices.as_array()]))
            best = max(
                abs(np.linalg.det(A[:, list(pair)]))
                for pair in itertools.combinations(range(6), 2)
            )

            assert chosen * factor >= best, t

    @pytest.mark.parametrize("seed", range(10))
    def test_pivot_block_keeps_numerical_rank(self, seed):
        """Test the selected columns have numerical rank s at threshold beta * eps."""
        scales = np.logspace(0, -6, 5)
        A = scales[:, None] * make_rng(seed).standard_normal((5, 40))
        values = singular_values(A)
        eps = 1.01 * values[0] / values[4]
        beta = np.sqrt(5 * (40 - 5) + 1)
        A1 = A[:, rrqr_select(A, 5).indices.as_array()]

        assert numerical_rank(A, eps) == 5
        assert sigma_k(A1, 5) >= sigma_k(A, 5) / beta
        assert numerical_rank(A1, beta * eps) == 5

    def test_local_maximum_volume(self, rng):
        """Test no single swap grows |det A1| by more than mu after convergence."""
        A = rng.standard_normal((3, 12))
        piv = rrqr_select(A, 3, swap_budget=100)
        A1 = A[:, piv.indices.as_array()]

        assert not piv.budget_exhausted
        assert np.max(np.abs(np.linalg.solve(A1, A))) <= 1.0 + 1e-9

    def test_rank_deficient(self):
        """Test rank below s is flagged and swaps are skipped."""
        A = np.outer([1.0, 2.0], [1.0, 0.5, 3.0, 1.0])
        piv = rrqr_select(A, 2)

        assert piv.rank_deficient
        assert piv.swaps == 0
        assert len(piv.indices) == 2

    def test_zero_budget(self, rng):
        """Test a zero swap budget keeps the greedy pivots."""
        piv = rrqr_select(rng.standard_normal((3, 9)), 3, swap_budget=0)

        assert piv.swaps == 0

    def test_rejects_tall(self):
        """Test tall input is refused."""
        with pytest.raises(InvalidSampleSizeError, match="wide"):
            rrqr_select(np.ones((4, 2)), 2)

    def test_rejects_large_s(self):
        """Test s above the row count is refused."""
        with pytest.raises(InvalidSampleSizeError):
            rrqr_select(np.ones((2, 5)), 3)


class TestAlgorithm1:
    """Test select_sample."""

    def test_exact_recovery(self, low_rank_matrix):
        """Test s = rank recovers the matrix exactly."""
        sel = select_sample(low_rank_matrix, 4, SamplerConfig())

        assert sel.ok
        assert sel.sigma_s_A > 0
        M_hat = reconstruct(factorize(partition(low_rank_matrix, sel.rows, sel.cols)))
        assert np.allclose(M_hat, low_rank_matrix, atol=1e-8)

    def test_rank_check_failure(self, low_rank_matrix):
        """Test s above the rank reports the failure message."""
        sel = select_sample(low_rank_matrix, 6, SamplerConfig())

        assert not sel.ok
        assert sel.reason == ALGORITHM1_FAILURE
        assert sel.diagnostics["rank_GA"] < 6 or sel.diagnostics["rank_SA"] < 6

    def test_diagnostics(self, rect_matrix):
        """Test the audit values are recorded."""
        sel = select_sample(rect_matrix, 4, SamplerConfig())

        for key in ("sigma_s_G", "sigma_s_S", "sigma_s_GA", "sigma_s_SA", "row_swaps", "col_swaps"):
            assert key in sel.diagnostics
        assert sel.e_s == pytest.approx(0.5 ** 4, rel=1e-10)
        assert sel.gamma == 1.0
        assert sel.beta_bound == pytest.approx(np.sqrt(4 * 16 + 1))

    def test_rrqr_guarantees_on_thin_factors(self, rect_matrix):
        """Test sigma_s(G_A) and sigma_s(S_A) clear the RRQR guarantee."""
        s, m, n = 4, 30, 20
        sel = select_sample(rect_matrix, s, SamplerConfig())
        d = sel.diagnostics

        assert d["sigma_s_GA"] >= d["sigma_s_G"] / np.sqrt(s * (m - s) + 1)
        assert d["sigma_s_SA"] >= d["sigma_s_S"] / np.sqrt(s * (n - s) + 1)

    @pytest.mark.parametrize("seed", range(20))
    def test_sampled_factor_product(self, seed):
        """Test sigma_s(G_A) sigma_s(S_A) <= sigma_s(G_A S_A) and A_M is nonsingular."""
        M = synthetic_matrix(SyntheticSpec(n=40, seed=seed))
        thin = thin_svd(M, 5)
        sel = select_sample(M, 5, SamplerConfig())
        G_A = thin.G[sel.rows.as_array(), :]
        S_A = thin.S[:, sel.cols.as_array()]

        assert sel.ok
        assert sel.sigma_s_A > 0
        assert sigma_k(G_A, 5) * sigma_k(S_A, 5) <= sigma_k(G_A @ S_A, 5) * (1 + 1e-10)

    def test_linear_time_front_end(self, rect_matrix):
        """Test the randomized front end is reproducible per seed."""
        cfg = SamplerConfig(thin_front_end="linear_time_svd", seed=9)
        a = select_sample(rect_matrix, 4, cfg)
        b = select_sample(rect_matrix, 4, cfg)

        assert a.rows == b.rows
        assert a.cols == b.cols
        assert a.diagnostics["front_end"] == "linear_time_svd"

    def test_invalid_sample_size(self, rect_matrix):
        """Test s above min(m, n) is refused."""
        with pytest.raises(InvalidSampleSizeError):
            select_sample(rect_matrix, 21, SamplerConfig())


class TestBaselineSamplers:
    """Test random, ICD and k-means samplers."""

    def test_random_symmetric(self):
        """Test a symmetric draw uses the same rows and columns."""
        sel = random_sample(10, 10, 4, seed=1, symmetric=True)

        assert sel.rows.indices == sel.cols.indices
        assert len(set(sel.rows.indices)) == 4
        assert np.isnan(sel.sigma_s_A)

    def test_random_reproducible(self, rect_matrix):
        """Test equal seeds give equal draws."""
        a = random_sample(30, 20, 5, seed=4, matrix=rect_matrix)
        b = random_sample(30, 20, 5, seed=4, matrix=rect_matrix)

        assert a.rows == b.rows and a.cols == b.cols
        assert a.sigma_s_A == b.sigma_s_A

    def test_random_draws_are_uniform(self):
        """Test every row index comes up about equally often over 1000 draws."""
        counts = np.zeros(20)
        for t in range(1000):
            sel = random_sample(20, 20, 4, seed=derive_seed(0, t))
            counts[sel.rows.as_array()] += 1

        assert counts.sum() == 4000
        assert stats.chisquare(counts).pvalue > 1e-3

    def test_random_singular_sample_fails(self):
        """Test a zero matrix yields a failed selection."""
        sel = random_sample(5, 5, 2, seed=0, matrix=np.zeros((5, 5)))

        assert not sel.ok
        assert "singular" in sel.reason

    def test_icd_first_pivot_is_largest_diagonal(self, psd_matrix):
        """Test ICD starts from the largest diagonal entry."""
        sel = icd_sample(psd_matrix, 3)

        assert sel.rows.indices[0] == int(np.argmax(np.diag(psd_matrix)))
        assert sel.rows == sel.cols
        assert sel.diagnostics["steps"] == 3

    def test_icd_full_rank_residual(self, psd_matrix):
        """Test s = n leaves no residual trace."""
        sel = icd_sample(psd_matrix, 20)

        assert sel.diagnostics["residual_trace"] == pytest.approx(0.0, abs=1e-10)

    def test_icd_trace_tolerance(self, psd_matrix):
        """Test the trace tolerance stops ICD early."""
        sel = icd_sample(psd_matrix, 20, trace_tol=1e-2)

        assert sel.diagnostics["steps"] < 20
        assert sel.diagnostics["residual_trace"] <= 1e-2

    def test_icd_rejects_asymmetric(self, rect_matrix):
        """Test non-square input is refused."""
        with pytest.raises(PsdViolationError, match="square"):
            icd_sample(rect_matrix, 2)

    def test_icd_rejects_indefinite(self):
        """Test a negative diagonal is refused."""
        with pytest.raises(PsdViolationError, match="Negative diagonal"):
            icd_sample(np.diag([1.0, -1.0, 0.5]), 2)

    def test_kmeans_picks_distinct_points(self, blobs, kernel_matrix):
        """Test k-means picks s distinct data points."""
        sel = kmeans_sample(blobs.values, 3, seed=2, matrix=kernel_matrix)

        assert len(set(sel.rows.indices)) == 3
        assert sel.rows == sel.cols
        assert sel.ok

    def test_kmeans_without_matrix(self, blobs):
        """Test an index-only k-means draw."""
        sel = kmeans_sample(blobs.values, 4, seed=0)

        assert np.isnan(sel.sigma_s_A)
        assert sel.ok

    def test_kmeans_reproducible(self, blobs):
        """Test equal seeds give equal landmarks."""
        a = kmeans_sample(blobs.values, 5, seed=3)
        b = kmeans_sample(blobs.values, 5, seed=3)

        assert a.rows == b.rows

    @pytest.mark.parametrize("seed", range(25))
    @pytest.mark.parametrize("shape", [(200, 2, 5), (90, 2, 3)])
    def test_kmeans_one_pick_per_planted_cluster(self, shape, seed):
        """Test well separated clusters each get exactly one landmark."""
        n, d, k = shape
        ds = gaussian_blobs(n, d, k, seed=seed)
        sel = kmeans_sample(ds.values, k, seed=seed + 1)

        picked = sorted(int(label) for label in ds.labels[sel.rows.as_array()])
        assert picked == list(range(k))

    def test_kmeans_all_points(self, blobs):
        """Test s = n returns every index."""
        points = blobs.values[:12]
        sel = kmeans_sample(points, 12, seed=0)

        assert sorted(sel.rows.indices) == list(range(12))


class TestRunSampler:
    """Test dispatch and the Monte-Carlo wrapper."""

    def test_failure_becomes_selection(self, rect_matrix):
        """Test sampler exceptions come back as a failed selection."""
        sel = run_sampler(rect_matrix, 3, SamplerConfig(method="icd"))

        assert not sel.ok
        assert "square" in sel.reason

    def test_kmeans_needs_points(self, kernel_matrix):
        """Test k-means without raw points is a usage error."""
        with pytest.raises(ValueError, match="raw data points"):
            run_sampler(kernel_matrix, 3, SamplerConfig(method="kmeans"))

    def test_seed_override(self, rect_matrix):
        """Test an explicit seed overrides the config seed."""
        cfg = SamplerConfig(method="random", seed=0)
        sel = run_sampler(rect_matrix, 3, cfg, seed=17)

        assert sel.seed == 17

    def test_monte_carlo_keeps_best(self, rect_matrix):
        """Test the best trial has the largest sigma_s(A_M)."""
        sel = monte_carlo_select(rect_matrix, 4, SamplerConfig(method="random", seed=3), trials=8)

        sigmas = sel.diagnostics["trial_sigmas"]
        assert sel.ok
        assert sel.sigma_s_A == max(sigmas)
        assert sigmas.index(max(sigmas)) == sel.diagnostics["trial"]

    def test_monte_carlo_parallel_matches_serial(self, rect_matrix):
        """Test worker count never changes the outcome."""
        serial = monte_carlo_select(rect_matrix, 4, SamplerConfig(method="random", seed=5), trials=6)
        parallel = monte_carlo_select(
            rect_matrix, 4, SamplerConfig(method="random", seed=5, workers=3), trials=6
        )

        assert serial.rows == parallel.rows
        assert serial.diagnostics["trial_sigmas"] == parallel.diagnostics["trial_sigmas"]

    @pytest.mark.slow
    def test_monte_carlo_beats_single_draw(self):
        """Test 20-trial Monte-Carlo has a lower mean error than one random draw."""
        M = synthetic_matrix(SyntheticSpec(n=300, decay="exponential", seed=4))

        def error(sel):
            assert sel.ok
            return observed_error(M, factorize(partition(M, sel.rows, sel.cols)))

        best, single = [], []
        for rep in range(20):
            cfg = SamplerConfig(method="random", seed=derive_seed(21, rep))
            best.append(error(monte_carlo_select(M, 15, cfg, trials=20)))
            single.append(error(run_sampler(M, 15, cfg)))

        wins = sum(b < s for b, s in zip(best, single))
        assert np.mean(best) < np.mean(single)
        assert wins > 10

    def test_monte_carlo_all_failed(self):
        """Test every failing trial yields a failed selection with reasons."""
        sel = monte_carlo_select(np.zeros((5, 5)), 2, SamplerConfig(method="random"), trials=3)

        assert not sel.ok
        assert sel.reason.startswith("All trials failed")
        assert len(sel.diagnostics["trial_reasons"]) == 3

    def test_monte_carlo_invalid_trials(self, rect_matrix):
        """Test trials must be at least 1."""
        with pytest.raises(ValueError, match="trials"):
            monte_carlo_select(rect_matrix, 2, SamplerConfig(method="random"), trials=0)


class TestSamplerModels:
    """Test SamplerConfig and SampleSelection validation."""

    def test_config_defaults(self):
        """Test default column count and swap budget."""
        cfg = SamplerConfig()

        assert cfg.columns_for(100, 4) == 40
        assert cfg.columns_for(20, 4) == 20
        assert cfg.swap_budget_for(5) == 20

    def test_config_invalid_method(self):
        """Test unknown methods are refused."""
        with pytest.raises(ValueError, match="Invalid method"):
            SamplerConfig(method="greedy")

    def test_config_invalid_threshold(self):
        """Test the rank threshold must exceed 1."""
        with pytest.raises(ValueError, match="rank_threshold"):
            SamplerConfig(rank_threshold=1.0)

    def test_config_invalid_restarts(self):
        """Test k-means needs at least one restart."""
        with pytest.raises(ValueError, match="kmeans_restarts"):
            SamplerConfig(kmeans_restarts=0)

    def test_failed_selection_needs_reason(self):
        """Test a failed selection without a reason is refused."""
        with pytest.raises(ValueError, match="reason"):
            SampleSelection(rows=None, cols=None, sigma_s_A=0.0, beta_bound=1.0, status="failed")

    def test_ok_selection_needs_indices(self):
        """Test a successful selection needs indices."""
        with pytest.raises(ValueError, match="indices"):
            SampleSelection(rows=None, cols=None, sigma_s_A=1.0, beta_bound=1.0)
