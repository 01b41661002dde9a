"""Kernel matrices and synthetic test inputs."""

import logging

import numpy as np
import scipy.linalg as sla
from scipy.spatial.distance import pdist, squareform

from src.data.models import (
    Dataset,
    DegenerateDatasetError,
    EXPONENTIAL,
    LINEAR,
    SyntheticSpec,
)
from src.sampling.seeds import make_rng


logger = logging.getLogger(__name__)

MEAN_DISTANCE = "mean"
PAIRWISE_DISTANCE = "pairwise"

CENTER_SEPARATION: float = 6.0
_PLACEMENT_ATTEMPTS = 1000


def kernel_bandwidth(ds: Dataset, mode: str = MEAN_DISTANCE) -> float:
    """epsilon: mean squared distance to the dataset mean, or mean pairwise squared distance."""
    X = ds.values
    if mode == MEAN_DISTANCE:
        centered = X - X.mean(axis=0)
        return float(np.mean(np.einsum("ij,ij->i", centered, centered)))
    if mode == PAIRWISE_DISTANCE:
        return float(np.mean(pdist(X, "sqeuclidean")))
    raise ValueError(f"Invalid bandwidth mode: {mode}. Expected 'mean' or 'pairwise'")


def gaussian_kernel(ds: Dataset, mode: str = MEAN_DISTANCE) -> np.ndarray:
    """K_ij = exp(-||x_i - x_j||^2 / epsilon), one evaluation per unordered pair."""
    if ds.n < 2:
        raise ValueError(f"Kernel needs at least 2 points, got {ds.n}")

    eps = kernel_bandwidth(ds, mode)
    if eps <= 0:
        raise DegenerateDatasetError(
            f"Dataset {ds.name} has zero spread (epsilon = {eps}); all points coincide"
        )

    K = squareform(np.exp(-pdist(ds.values, "sqeuclidean") / eps))
    np.fill_diagonal(K, 1.0)
    logger.debug(f"Gaussian kernel for {ds.name}: n={ds.n}, epsilon={eps:.4g}")
    return np.ascontiguousarray(K)


def haar_orthogonal(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed orthogonal matrix: QR of a Gaussian matrix, R-diagonal signs fixed."""
    Z = rng.standard_normal((n, n))
    Q, R = sla.qr(Z)
    signs = np.sign(np.diag(R))
    signs[signs == 0] = 1.0
    return Q * signs


def synthetic_spectrum(spec: SyntheticSpec) -> np.ndarray:
    i = np.arange(spec.n, dtype=np.float64)
    if spec.decay == LINEAR:
        values = 1.0 - i / spec.n
    elif spec.decay == EXPONENTIAL:
        values = spec.rate ** i
    else:
        raise ValueError(f"Invalid decay: {spec.decay}")

    if spec.rank is not None:
        values[spec.rank:] = 0.0
    return values


def synthetic_matrix(spec: SyntheticSpec) -> np.ndarray:
    """U L V^T with independent Haar U, V and the diagonal L from SyntheticSpec."""
    rng = make_rng(spec.seed)
    U = haar_orthogonal(spec.n, rng)
    V = haar_orthogonal(spec.n, rng)
    L = synthetic_spectrum(spec)
    return np.ascontiguousarray((U * L) @ V.T)


def _place_centers(k: int, d: int, rng: np.random.Generator, separation: float) -> np.ndarray:
    """k centers pairwise >= separation apart: rejection sampling, line placement as fallback."""
    box = separation * max(k, 1)
    centers = []
    for _ in range(_PLACEMENT_ATTEMPTS * k):
        if len(centers) == k:
            break
        candidate = rng.uniform(0.0, box, size=d)
        if all(np.linalg.norm(candidate - c) >= separation for c in centers):
            centers.append(candidate)

    if len(centers) < k:
        logger.info(f"Rejection sampling placed {len(centers)} of {k} centers; using line placement")
        line = np.zeros((k, d))
        line[:, 0] = separation * np.arange(k)
        return line
    return np.asarray(centers)


def gaussian_blobs(
    n: int,
    d: int,
    k: int,
    seed: int = 0,
    separation: float = CENTER_SEPARATION,
) -> Dataset:
    """k isotropic unit-variance clusters of (near) equal size around well separated centers."""
    if not 1 <= k <= n:
        raise ValueError(f"Need 1 <= k <= n, got k={k}, n={n}")
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")

    rng = make_rng(seed)
    centers = _place_centers(k, d, rng, separation)

    sizes = np.full(k, n // k)
    sizes[: n % k] += 1
    labels = np.repeat(np.arange(k), sizes)
    values = centers[labels] + rng.standard_normal((n, d))

    return Dataset(values=values, name=f"blobs-{n}x{d}-k{k}", labels=labels.astype(np.float64))
