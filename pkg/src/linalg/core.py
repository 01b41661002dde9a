"""Classical dense factorizations on float64 row-major matrices.

Every function returns new arrays; inputs are never modified.
"""

import logging
from typing import Optional, Tuple

import numpy as np
import scipy.linalg as sla

from src.linalg.models import (
    BlockPartition,
    DenseMatrix,
    EvdResult,
    IndexLike,
    IndexSet,
    InvalidIndexSetError,
    InvalidMatrixError,
    NoRealSquareRoot,
    SvdConvergenceError,
    SvdResult,
)


logger = logging.getLogger(__name__)

MACHINE_EPS: float = float(np.finfo(np.float64).eps)

# Eigenbasis with condition above this is treated as defective
DEFECTIVE_CONDITION: float = 1.0 / np.sqrt(MACHINE_EPS)

SQRT_RESIDUAL_TOL: float = 1e-8


def as_matrix(M) -> DenseMatrix:
    """Copy M into a finite float64 C-ordered 2-D array."""
    try:
        arr = np.array(M, dtype=np.float64, order="C", copy=True)
    except (TypeError, ValueError) as e:
        raise InvalidMatrixError(f"Cannot convert input to a real matrix: {e}") from e

    if arr.ndim != 2:
        raise InvalidMatrixError(f"Expected a 2-D matrix, got {arr.ndim} dimensions")
    if not np.all(np.isfinite(arr)):
        raise InvalidMatrixError("Matrix contains NaN or Inf entries")
    return arr


def _normalize_signs(U: np.ndarray, *partners: np.ndarray) -> None:
    """Flip columns in place so the largest-magnitude entry of each U column is positive."""
    if U.size == 0:
        return
    idx = np.argmax(np.abs(U), axis=0)
    signs = np.sign(U[idx, np.arange(U.shape[1])])
    signs[signs == 0] = 1.0
    U *= signs
    for P in partners:
        P *= signs


def normalize_signs(U: np.ndarray, *partners: np.ndarray) -> Tuple[np.ndarray, ...]:
    """Sign-normalized copies of U and of every partner factor sharing its columns."""
    U = np.array(U, copy=True)
    partners = tuple(np.array(P, copy=True) for P in partners)
    _normalize_signs(U, *partners)
    return (U,) + partners


def singular_values(M: DenseMatrix) -> np.ndarray:
    """Singular values of M, non-increasing. Empty for empty M."""
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return np.zeros(0)
    try:
        return sla.svdvals(M)
    except sla.LinAlgError as e:
        raise SvdConvergenceError(f"svdvals failed on {M.shape} matrix: {e}") from e


def sigma_k(M: DenseMatrix, k: int) -> float:
    """k-th singular value (1-based); zero when k exceeds min(m, n)."""
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    values = singular_values(M)
    return float(values[k - 1]) if k <= values.shape[0] else 0.0


def full_svd(M: DenseMatrix) -> SvdResult:
    """Thin SVD with deterministic signs.

    Uses the divide-and-conquer driver and retries with the QR-iteration
    driver before giving up.
    """
    M = as_matrix(M)
    m, n = M.shape
    k = min(m, n)
    if k == 0:
        return SvdResult(U=np.zeros((m, 0)), values=np.zeros(0), V=np.zeros((n, 0)))

    try:
        U, s, Vt = sla.svd(M, full_matrices=False, lapack_driver="gesdd")
    except sla.LinAlgError:
        logger.warning(f"gesdd did not converge on {M.shape} matrix, retrying with gesvd")
        try:
            U, s, Vt = sla.svd(M, full_matrices=False, lapack_driver="gesvd")
        except sla.LinAlgError as e:
            raise SvdConvergenceError(f"SVD did not converge on {M.shape} matrix: {e}") from e

    V = np.ascontiguousarray(Vt.T)
    U = np.ascontiguousarray(U)
    _normalize_signs(U, V)
    return SvdResult(U=U, values=s, V=V)


def full_evd(A: DenseMatrix) -> EvdResult:
    """Eigendecomposition sorted by non-increasing |lambda|.

    Exactly symmetric input goes through eigh and yields an orthogonal
    basis. Anything else goes through the general solver; complex pairs are
    kept and flagged with is_real=False.
    """
    A = as_matrix(A)
    if A.shape[0] != A.shape[1]:
        raise InvalidMatrixError(f"Eigendecomposition needs a square matrix, got {A.shape}")

    k = A.shape[0]
    if k == 0:
        return EvdResult(vectors=np.zeros((0, 0)), values=np.zeros(0), inverse=np.zeros((0, 0)))

    if np.array_equal(A, A.T):
        w, U = sla.eigh(A)
        order = np.argsort(-np.abs(w), kind="stable")
        w = w[order]
        U = np.ascontiguousarray(U[:, order])
        _normalize_signs(U)
        return EvdResult(
            vectors=U,
            values=w,
            inverse=np.ascontiguousarray(U.T),
            condition=1.0,
            defective=False,
            is_real=True,
            symmetric=True,
        )

    try:
        w, U = sla.eig(A)
    except sla.LinAlgError as e:
        raise SvdConvergenceError(f"Eigensolver did not converge on {A.shape} matrix: {e}") from e

    order = np.argsort(-np.abs(w), kind="stable")
    w = w[order]
    U = U[:, order]

    is_real = bool(np.all(w.imag == 0))
    if is_real:
        w = w.real.copy()
        U = np.ascontiguousarray(U.real)
        _normalize_signs(U)

    condition = float(np.linalg.cond(U))
    defective = not np.isfinite(condition) or condition > DEFECTIVE_CONDITION
    inverse = None
    if not defective:
        inverse = sla.inv(U)
    else:
        logger.debug(f"Eigenbasis condition {condition:.3e} exceeds {DEFECTIVE_CONDITION:.3e}")

    return EvdResult(
        vectors=U,
        values=w,
        inverse=inverse,
        condition=condition,
        defective=defective,
        is_real=is_real,
        symmetric=False,
    )


def default_tolerance(A: DenseMatrix, sigma1: Optional[float] = None) -> float:
    """max(m, n) * sigma_1 * machine eps."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    if sigma1 is None:
        sigma1 = float(singular_values(A)[0])
    return max(A.shape) * sigma1 * MACHINE_EPS


def pseudo_inverse(A: DenseMatrix, tol: Optional[float] = None) -> DenseMatrix:
    """Moore-Penrose inverse; singular values <= tol are treated as zero."""
    A = as_matrix(A)
    m, n = A.shape
    if A.size == 0:
        return np.zeros((n, m))

    svd = full_svd(A)
    if tol is None:
        tol = default_tolerance(A, sigma1=float(svd.values[0]))

    keep = svd.values > tol
    if not np.any(keep):
        return np.zeros((n, m))
    return np.ascontiguousarray((svd.V[:, keep] / svd.values[keep]) @ svd.U[:, keep].T)


def matrix_sqrt(A: DenseMatrix) -> DenseMatrix:
    """Real principal square root via diagonalization.

    Raises NoRealSquareRoot when the spectrum is complex, touches the closed
    negative real axis, the eigenbasis is defective, or the result fails the
    S @ S = A residual check.
    """
    A = as_matrix(A)
    evd = full_evd(A)

    if not evd.is_real:
        raise NoRealSquareRoot("Spectrum has complex eigenvalues")
    if evd.values.size and np.any(evd.values <= 0):
        raise NoRealSquareRoot(
            f"Eigenvalue {float(np.min(evd.values)):.3e} lies on the closed negative real axis"
        )
    if evd.defective:
        raise NoRealSquareRoot(f"Eigenbasis is defective (condition {evd.condition:.3e})")

    S = (evd.vectors * np.sqrt(evd.values)) @ evd.inverse
    if evd.symmetric:
        S = 0.5 * (S + S.T)
    S = np.ascontiguousarray(S)

    scale = spectral_norm(A)
    residual = spectral_norm(S @ S - A)
    if residual > SQRT_RESIDUAL_TOL * scale:
        raise NoRealSquareRoot(
            f"Square root residual {residual:.3e} exceeds {SQRT_RESIDUAL_TOL:.0e} * {scale:.3e}"
        )
    return S


def numerical_rank(A: DenseMatrix, eps: float) -> int:
    """Count of singular values before the first with sigma_1 / sigma_i > eps.

    Equality sigma_1 / sigma_i == eps counts as within rank.
    """
    if eps <= 1:
        raise ValueError(f"eps must be > 1, got {eps}")

    values = singular_values(A)
    if values.size == 0 or values[0] == 0:
        return 0

    cut = np.nonzero(values[0] > eps * values)[0]
    return int(cut[0]) if cut.size else int(values.size)


def _index_set(idx: IndexLike, bound: int) -> IndexSet:
    if isinstance(idx, IndexSet):
        if idx.bound != bound:
            raise InvalidIndexSetError(f"Index set bound {idx.bound} does not match dimension {bound}")
        return idx
    return IndexSet(tuple(np.asarray(idx).ravel().tolist()), bound)


def partition(M: DenseMatrix, rows: IndexLike, cols: IndexLike) -> BlockPartition:
    """Split M into A = M[I, J] and its neighbours B, F, C."""
    M = as_matrix(M)
    m, n = M.shape
    I = _index_set(rows, m)
    J = _index_set(cols, n)

    s = len(I)
    if len(J) != s:
        raise InvalidIndexSetError(f"Row set has {s} indices but column set has {len(J)}")
    if s > min(m, n):
        raise InvalidIndexSetError(f"Sample size {s} exceeds min(m, n) = {min(m, n)}")

    i_idx = I.as_array()
    j_idx = J.as_array()
    ic_idx = np.asarray(I.complement(), dtype=np.intp)
    jc_idx = np.asarray(J.complement(), dtype=np.intp)

    return BlockPartition(
        m=m,
        n=n,
        s=s,
        rows=I,
        cols=J,
        A=np.ascontiguousarray(M[np.ix_(i_idx, j_idx)]),
        B=np.ascontiguousarray(M[np.ix_(i_idx, jc_idx)]),
        F=np.ascontiguousarray(M[np.ix_(ic_idx, j_idx)]),
        C=np.ascontiguousarray(M[np.ix_(ic_idx, jc_idx)]),
    )


def reassemble(p: BlockPartition) -> DenseMatrix:
    """Pivoted matrix rebuilt from the four blocks."""
    return p.reassemble()


def restore_order(pivoted: DenseMatrix, row_order: np.ndarray, col_order: np.ndarray) -> DenseMatrix:
    """Undo the pivot permutation so entries line up with the source matrix."""
    out = np.empty_like(pivoted)
    out[np.ix_(row_order, col_order)] = pivoted
    return out


def unpermute_rows(pivoted_rows: np.ndarray, order: np.ndarray) -> np.ndarray:
    """Put rows of a factor computed in pivot order back into source order."""
    out = np.empty_like(pivoted_rows)
    out[order] = pivoted_rows
    return out


def spectral_norm(M: DenseMatrix) -> float:
    values = singular_values(M)
    return float(values[0]) if values.size else 0.0


def frobenius_norm(M: DenseMatrix) -> float:
    M = np.asarray(M, dtype=np.float64)
    if M.size == 0:
        return 0.0
    return float(sla.norm(M, "fro"))


def condition_number(A: DenseMatrix) -> float:
    """Spectral condition number; inf for singular or empty input."""
    values = singular_values(A)
    if values.size == 0 or values[-1] == 0:
        return float("inf")
    return float(values[0] / values[-1])
