"""Shared test fixtures."""

import numpy as np
import pytest

from src.data.generators import gaussian_blobs, gaussian_kernel
from src.data.loader import DataLoader
from src.sampling.seeds import make_rng


@pytest.fixture
def rng():
    """Returns a seeded PCG64 generator."""
    return make_rng(1234)


@pytest.fixture
def rect_matrix(rng):
    """30x20 matrix with a fast-decaying spectrum."""
    U, _ = np.linalg.qr(rng.standard_normal((30, 20)))
    V, _ = np.linalg.qr(rng.standard_normal((20, 20)))
    values = 0.5 ** np.arange(20)
    return (U * values) @ V.T


@pytest.fixture
def low_rank_matrix(rng):
    """25x18 matrix of exact rank 4."""
    return rng.standard_normal((25, 4)) @ rng.standard_normal((4, 18))


@pytest.fixture
def psd_matrix(rng):
    """20x20 symmetric positive definite matrix with well separated eigenvalues."""
    Q, _ = np.linalg.qr(rng.standard_normal((20, 20)))
    values = 2.0 ** -np.arange(20)
    K = (Q * values) @ Q.T
    return 0.5 * (K + K.T)


@pytest.fixture
def blobs():
    """Three well separated gaussian blobs, 60 points in 2-D."""
    return gaussian_blobs(60, 2, 3, seed=7)


@pytest.fixture
def kernel_matrix(blobs):
    """Gaussian kernel of the blobs fixture."""
    return gaussian_kernel(blobs)


@pytest.fixture
def data_loader(tmp_path):
    """Returns a DataLoader over an empty temporary data directory."""
    return DataLoader(tmp_path)
