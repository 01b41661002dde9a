"""Unit tests for kernels and synthetic inputs."""

import numpy as np
import pytest

from src.data.generators import (
    gaussian_blobs,
    gaussian_kernel,
    haar_orthogonal,
    kernel_bandwidth,
    synthetic_matrix,
    synthetic_spectrum,
)
from src.data.models import Dataset, DegenerateDatasetError, SyntheticSpec
from src.linalg import singular_values


class TestGaussianKernel:
    """Test gaussian_kernel and its bandwidth."""

    def test_kernel_properties(self, blobs):
        """Test the kernel is symmetric, unit-diagonal and PSD."""
        K = gaussian_kernel(blobs)

        assert K.shape == (60, 60)
        assert np.array_equal(K, K.T)
        assert np.all(np.diag(K) == 1.0)
        assert np.min(np.linalg.eigvalsh(K)) > -1e-10

    def test_kernel_entries(self):
        """Test entries against exp(-d^2 / epsilon)."""
        ds = Dataset(values=[[0.0], [1.0], [3.0]])
        eps = kernel_bandwidth(ds)
        K = gaussian_kernel(ds)

        assert K[0, 2] == pytest.approx(np.exp(-9.0 / eps))
        assert K[1, 2] == pytest.approx(np.exp(-4.0 / eps))

    def test_bandwidth_modes(self):
        """Test mean-distance and pairwise bandwidths."""
        ds = Dataset(values=[[0.0], [2.0]])

        assert kernel_bandwidth(ds, "mean") == pytest.approx(1.0)
        assert kernel_bandwidth(ds, "pairwise") == pytest.approx(4.0)

    def test_bandwidth_invalid_mode(self, blobs):
        """Test unknown bandwidth modes are refused."""
        with pytest.raises(ValueError, match="Invalid bandwidth mode"):
            kernel_bandwidth(blobs, "median")

    def test_coincident_points(self):
        """Test identical points have no usable bandwidth."""
        with pytest.raises(DegenerateDatasetError, match="zero spread"):
            gaussian_kernel(Dataset(values=np.ones((4, 2))))

    def test_single_point(self):
        """Test a one-point dataset is refused."""
        with pytest.raises(ValueError, match="at least 2 points"):
            gaussian_kernel(Dataset(values=[[1.0, 2.0]]))


class TestSynthetic:
    """Test synthetic spectra and matrices."""

    def test_haar_orthogonal(self, rng):
        """Test the Haar sample is orthogonal."""
        Q = haar_orthogonal(12, rng)

        assert np.allclose(Q.T @ Q, np.eye(12), atol=1e-12)

    def test_linear_spectrum(self):
        """Test L_ii = 1 - (i - 1)/n."""
        values = synthetic_spectrum(SyntheticSpec(n=4, decay="linear"))

        assert values.tolist() == pytest.approx([1.0, 0.75, 0.5, 0.25])

    def test_exponential_spectrum(self):
        """Test L_ii = rate^(i - 1)."""
        values = synthetic_spectrum(SyntheticSpec(n=4, rate=0.5))

        assert values.tolist() == pytest.approx([1.0, 0.5, 0.25, 0.125])

    def test_truncated_rank(self):
        """Test rank zeroes the tail."""
        values = synthetic_spectrum(SyntheticSpec(n=6, rank=2))

        assert values.tolist() == pytest.approx([1.0, 0.5, 0.0, 0.0, 0.0, 0.0])

    def test_matrix_has_prescribed_singular_values(self):
        """Test U L V^T has singular values L."""
        spec = SyntheticSpec(n=40, decay="linear", seed=3)
        M = synthetic_matrix(spec)

        assert np.allclose(singular_values(M), synthetic_spectrum(spec), atol=1e-12)

    def test_matrix_reproducible(self):
        """Test equal seeds give equal matrices."""
        a = synthetic_matrix(SyntheticSpec(n=10, seed=5))
        b = synthetic_matrix(SyntheticSpec(n=10, seed=5))

        assert np.array_equal(a, b)


class TestBlobs:
    """Test gaussian_blobs."""

    def test_blob_shape_and_labels(self):
        """Test sizes, labels and name."""
        ds = gaussian_blobs(31, 3, 4, seed=1)

        assert ds.n == 31
        assert ds.d == 3
        assert ds.name == "blobs-31x3-k4"
        assert np.bincount(ds.labels.astype(int)).tolist() == [8, 8, 8, 7]

    def test_blobs_reproducible(self):
        """Test equal seeds give equal points."""
        assert np.array_equal(gaussian_blobs(20, 2, 2, seed=4).values, gaussian_blobs(20, 2, 2, seed=4).values)

    def test_blob_centers_separated(self):
        """Test cluster means sit far apart."""
        ds = gaussian_blobs(300, 2, 3, seed=0)
        means = np.array([ds.values[ds.labels == j].mean(axis=0) for j in range(3)])
        gaps = [np.linalg.norm(means[i] - means[j]) for i in range(3) for j in range(i + 1, 3)]

        assert min(gaps) > 4.0

    def test_invalid_cluster_count(self):
        """Test k above n is refused."""
        with pytest.raises(ValueError, match="1 <= k <= n"):
            gaussian_blobs(3, 2, 4)
