"""Canonical SVD/EVD forms of the Nystrom approximation.

Six constructors, all working on s x s cores so the cost stays
O(s^2 (m + n)):

- evd_general / evd_single_step
- svd_general / svd_single_step
- symmetric_svd_general / symmetric_svd_single_step

Single-step variants route through A^{-1/2} and raise NoRealSquareRoot
when A has no real principal square root. decompose() is the caller policy
that falls back to the general variant in that case.

Results come back in the source matrix's index order with signs fixed so
that the largest-magnitude entry of every left vector is positive.
"""

import logging
from typing import Dict, Optional, Tuple

import numpy as np
import scipy.linalg as sla

from src.linalg.core import (
    MACHINE_EPS,
    default_tolerance,
    full_evd,
    matrix_sqrt,
    normalize_signs,
    pseudo_inverse,
    unpermute_rows,
)
from src.linalg.models import BlockPartition, DenseMatrix, NoRealSquareRoot
from src.nystrom.extension import extend_evd, extend_svd
from src.nystrom.models import (
    AsymmetricInputError,
    CanonicalDecomposition,
    ComplexSpectrum,
    DefectiveEigenbasis,
    EVD_KIND,
    GENERAL,
    IndefiniteSampleError,
    NegativeEigenvalue,
    PivotMismatchError,
    SINGLE_STEP,
    SVD_KIND,
    ZeroEigenvalue,
)


logger = logging.getLogger(__name__)

SYMMETRY_TOL: float = 1e-12


def _inverse_sqrt(A: DenseMatrix) -> DenseMatrix:
    return pseudo_inverse(matrix_sqrt(A))


def _require_symmetric_pivot(p: BlockPartition, what: str) -> None:
    if p.m != p.n:
        raise PivotMismatchError(f"{what} needs a square matrix, got {p.m}x{p.n}")
    if p.rows.indices != p.cols.indices:
        raise PivotMismatchError(f"{what} needs identical row and column pivots")


def _check_symmetric(p: BlockPartition) -> None:
    """Spot-check A against A^T and F against B^T."""
    scale = max(
        float(np.max(np.abs(p.A))) if p.A.size else 0.0,
        float(np.max(np.abs(p.B))) if p.B.size else 0.0,
        1.0,
    )
    tol = SYMMETRY_TOL * scale
    if p.A.size and np.max(np.abs(p.A - p.A.T)) > tol:
        raise AsymmetricInputError("Sample block A is not symmetric")
    if p.F.size and np.max(np.abs(p.F - p.B.T)) > tol:
        raise AsymmetricInputError("Off-diagonal blocks violate F = B^T")


def _gram_basis(Z: DenseMatrix, side: str) -> Tuple[np.ndarray, np.ndarray, bool]:
    """Eigenpairs of Z^T Z, descending, dropping those at or below tolerance."""
    w, F = sla.eigh(Z.T @ Z)
    w = w[::-1]
    F = F[:, ::-1]

    top = float(w[0]) if w.size else 0.0
    tol = max(Z.shape) * max(top, 0.0) * MACHINE_EPS
    keep = w > tol
    truncated = not bool(np.all(keep))
    if truncated:
        logger.warning(
            f"{side} block has rank {int(np.sum(keep))} < {w.size}; truncating Gram spectrum"
        )
    return w[keep], F[:, keep], truncated


def _svd_from_factors(
    Z_U: DenseMatrix,
    Z_H: DenseMatrix,
    p: BlockPartition,
    method: str,
    symmetric: bool = False,
    diagnostics: Optional[Dict] = None,
) -> CanonicalDecomposition:
    """Orthonormal SVD of Z_U Z_H^T through the two s x s Gram matrices."""
    sig_U, F_U, trunc_U = _gram_basis(Z_U, "Left")
    sig_H, F_H, trunc_H = _gram_basis(Z_H, "Right")

    root_U = np.sqrt(sig_U)
    root_H = np.sqrt(sig_H)
    D = (root_U[:, None] * (F_U.T @ F_H)) * root_H[None, :]
    U_D, lam_D, H_Dt = sla.svd(D, full_matrices=False)

    U_o = ((Z_U @ F_U) / root_U) @ U_D
    H_o = ((Z_H @ F_H) / root_H) @ H_Dt.T

    U_o = unpermute_rows(U_o, p.row_order)
    H_o = unpermute_rows(H_o, p.col_order)
    U_o, H_o = normalize_signs(U_o, H_o)

    info = dict(diagnostics or {})
    info["truncated"] = trunc_U or trunc_H
    return CanonicalDecomposition(
        left=U_o,
        values=lam_D,
        right=H_o,
        kind=SVD_KIND,
        method=method,
        symmetric=symmetric,
        partition=p,
        diagnostics=info,
    )


def _evd_from_factors(
    G_U: DenseMatrix,
    G_V: DenseMatrix,
    p: BlockPartition,
    method: str,
    diagnostics: Optional[Dict] = None,
) -> CanonicalDecomposition:
    """Biorthogonal EVD of G_U G_V through the s x s product G_V G_U."""
    K = G_V @ G_U
    evd = full_evd(K)

    if not evd.is_real:
        raise ComplexSpectrum("Approximated matrix has complex eigenvalues")
    if evd.defective:
        raise DefectiveEigenbasis(
            f"Core eigenbasis condition {evd.condition:.3e} is too large to invert"
        )

    sigma = evd.values
    tol = default_tolerance(K)
    if sigma.size and np.min(np.abs(sigma)) <= tol:
        raise ZeroEigenvalue(
            f"Approximated matrix has a nilpotent part (eigenvalue {float(np.min(np.abs(sigma))):.3e})"
        )

    # Negative eigenvalues keep their sign on the V side so V_o U_o = I holds.
    root = np.sqrt(np.abs(sigma))
    U_o = (G_U @ evd.vectors) / root
    V_o = (np.sign(sigma) / root)[:, None] * (evd.inverse @ G_V)

    U_o = unpermute_rows(U_o, p.row_order)
    V_o_t = unpermute_rows(np.ascontiguousarray(V_o.T), p.col_order)
    U_o, V_o_t = normalize_signs(U_o, V_o_t)

    info = dict(diagnostics or {})
    info["core_condition"] = evd.condition
    return CanonicalDecomposition(
        left=U_o,
        values=sigma,
        right=np.ascontiguousarray(V_o_t.T),
        kind=EVD_KIND,
        method=method,
        symmetric=False,
        partition=p,
        diagnostics=info,
    )


def evd_general(p: BlockPartition) -> CanonicalDecomposition:
    """EVD of M-hat from G_U = U-hat L^{1/2} and G_V = L^{1/2} V-hat."""
    _require_symmetric_pivot(p, "EVD")
    ext = extend_evd(p)

    lam = ext.values
    if np.any(lam < 0):
        raise NegativeEigenvalue(
            f"Sample block eigenvalue {float(np.min(lam)):.3e} is negative, L^(1/2) is not real"
        )

    root = np.sqrt(lam)
    G_U = ext.left * root
    G_V = root[:, None] * ext.right
    return _evd_from_factors(G_U, G_V, p, GENERAL)


def evd_single_step(p: BlockPartition) -> CanonicalDecomposition:
    """EVD of M-hat from G_U = [A; F] A^{-1/2} and G_V = A^{-1/2} [A B]."""
    _require_symmetric_pivot(p, "EVD")
    A_inv_sqrt = _inverse_sqrt(p.A)

    G_U = np.vstack([p.A, p.F]) @ A_inv_sqrt
    G_V = A_inv_sqrt @ np.hstack([p.A, p.B])
    return _evd_from_factors(G_U, G_V, p, SINGLE_STEP)


def svd_general(p: BlockPartition) -> CanonicalDecomposition:
    """SVD of M-hat from Z_U = U-hat L^{1/2} and Z_H = H-hat L^{1/2}."""
    ext = extend_svd(p)
    root = np.sqrt(ext.values)
    return _svd_from_factors(ext.left * root, ext.right * root, p, GENERAL)


def svd_single_step(p: BlockPartition) -> CanonicalDecomposition:
    """SVD of M-hat from G_U = [A; F] A^{-1/2} and G_H = (A^{-1/2} [A B])^T."""
    A_inv_sqrt = _inverse_sqrt(p.A)

    G_U = np.vstack([p.A, p.F]) @ A_inv_sqrt
    G_H = (A_inv_sqrt @ np.hstack([p.A, p.B])).T
    return _svd_from_factors(G_U, G_H, p, SINGLE_STEP)


def _symmetric_result(
    G: DenseMatrix,
    basis: np.ndarray,
    values: np.ndarray,
    p: BlockPartition,
    method: str,
) -> CanonicalDecomposition:
    """U_o = G basis values^{-1/2}, in source order, descending values."""
    order = np.argsort(-values, kind="stable")
    values = values[order]
    basis = basis[:, order]

    tol = max(G.shape) * (float(values[0]) if values.size else 0.0) * MACHINE_EPS
    keep = values > tol
    if not np.all(keep):
        logger.warning(
            f"Symmetric core has rank {int(np.sum(keep))} < {values.size}; truncating"
        )
    values = values[keep]
    basis = basis[:, keep]

    U_o = (G @ basis) / np.sqrt(values)
    U_o = unpermute_rows(U_o, p.row_order)
    (U_o,) = normalize_signs(U_o)

    return CanonicalDecomposition(
        left=U_o,
        values=values,
        right=U_o.copy(),
        kind=SVD_KIND,
        method=method,
        symmetric=True,
        partition=p,
        diagnostics={"truncated": not bool(np.all(keep))},
    )


def symmetric_svd_general(p: BlockPartition) -> CanonicalDecomposition:
    """Z = U-hat L^{1/2}, Z^T Z = F S F^T, U_o = Z F S^{-1/2}."""
    _require_symmetric_pivot(p, "Symmetric SVD")
    _check_symmetric(p)

    A = 0.5 * (p.A + p.A.T)
    evd = full_evd(A)
    lam = evd.values
    tol = default_tolerance(A)
    if lam.size and np.min(lam) <= tol:
        raise IndefiniteSampleError(
            f"Sample block eigenvalue {float(np.min(lam)):.3e} is not positive; "
            f"use svd_general instead"
        )

    U = evd.vectors
    U_hat = np.vstack([U, (p.F @ U) / lam])
    Z = U_hat * np.sqrt(lam)

    w, basis = sla.eigh(Z.T @ Z)
    return _symmetric_result(Z, basis, w, p, GENERAL)


def symmetric_svd_single_step(p: BlockPartition) -> CanonicalDecomposition:
    """G = [A; F] A^{-1/2}, S = A + A^{-1/2} B B^T A^{-1/2}, U_o = G U_S L_S^{-1/2}."""
    _require_symmetric_pivot(p, "Symmetric SVD")
    _check_symmetric(p)

    A = 0.5 * (p.A + p.A.T)
    A_inv_sqrt = _inverse_sqrt(A)

    G = np.vstack([A, p.F]) @ A_inv_sqrt
    W = A_inv_sqrt @ p.B
    S = A + W @ W.T
    S = 0.5 * (S + S.T)

    w, basis = sla.eigh(S)
    return _symmetric_result(G, basis, w, p, SINGLE_STEP)


_CONSTRUCTORS = {
    (SVD_KIND, False): (svd_single_step, svd_general),
    (SVD_KIND, True): (symmetric_svd_single_step, symmetric_svd_general),
    (EVD_KIND, False): (evd_single_step, evd_general),
}


def decompose(
    p: BlockPartition,
    kind: str = SVD_KIND,
    symmetric: bool = False,
    prefer_single_step: bool = True,
) -> CanonicalDecomposition:
    """Pick a constructor; on NoRealSquareRoot fall back to the general variant."""
    key = (kind, symmetric)
    if key not in _CONSTRUCTORS:
        raise ValueError(f"No constructor for kind={kind!r} symmetric={symmetric}")

    single_step, general = _CONSTRUCTORS[key]
    if not prefer_single_step:
        return general(p)

    try:
        return single_step(p)
    except NoRealSquareRoot as e:
        logger.info(f"Single-step {kind} unavailable ({e}); using general method")
        result = general(p)
        result.diagnostics["fallback_reason"] = str(e)
        return result
