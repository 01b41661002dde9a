"""Nystrom out-of-sample extension of the sample block's EVD/SVD."""

import logging

import numpy as np

from src.linalg.core import (
    default_tolerance,
    full_evd,
    full_svd,
    pseudo_inverse,
    restore_order,
)
from src.linalg.models import BlockPartition, DenseMatrix
from src.nystrom.models import (
    ComplexSpectrum,
    DefectiveEigenbasis,
    EVD_KIND,
    ExtendedVectors,
    NystromFactorization,
    SingularSample,
    SVD_KIND,
    ZeroEigenvalue,
)


logger = logging.getLogger(__name__)


def extend_evd(p: BlockPartition) -> ExtendedVectors:
    """U-hat = [U; F U L^-1], V-hat = [U^-1, L^-1 U^-1 B] from A = U L U^-1."""
    evd = full_evd(p.A)

    if not evd.is_real:
        raise ComplexSpectrum(
            f"Sample block has complex eigenvalues, e.g. {evd.values[np.argmax(np.abs(evd.values.imag))]}"
        )
    if evd.defective:
        raise DefectiveEigenbasis(
            f"Sample block eigenbasis condition {evd.condition:.3e} is too large to invert"
        )

    lam = evd.values
    tol = default_tolerance(p.A)
    if lam.size and np.min(np.abs(lam)) <= tol:
        raise ZeroEigenvalue(
            f"Sample block eigenvalue {float(np.min(np.abs(lam))):.3e} is within tolerance {tol:.3e} of zero"
        )

    U = evd.vectors
    U_inv = evd.inverse
    left = np.vstack([U, (p.F @ U) / lam])
    right = np.hstack([U_inv, (U_inv @ p.B) / lam[:, None]])

    logger.debug(f"Extended EVD of {p.s}x{p.s} sample to {p.m}x{p.n}")
    return ExtendedVectors(left=left, values=lam, right=right, path=EVD_KIND, partition=p)


def extend_svd(p: BlockPartition) -> ExtendedVectors:
    """U-hat = [U; F H L^-1], H-hat = [H; B^T U L^-1] from A = U L H^T."""
    svd = full_svd(p.A)
    lam = svd.values

    tol = default_tolerance(p.A, sigma1=float(lam[0]) if lam.size else 0.0)
    if lam.size and lam[-1] <= tol:
        raise SingularSample(
            f"sigma_s of the sample block is {float(lam[-1]):.3e}, at or below tolerance {tol:.3e}"
        )

    U, H = svd.U, svd.V
    left = np.vstack([U, (p.F @ H) / lam])
    right = np.vstack([H, (p.B.T @ U) / lam])

    logger.debug(f"Extended SVD of {p.s}x{p.s} sample to {p.m}x{p.n}")
    return ExtendedVectors(left=left, values=lam, right=right, path=SVD_KIND, partition=p)


def factorize(p: BlockPartition) -> NystromFactorization:
    """Factored M-hat = [A; F] A^+ [A B]; rank-deficient A goes through A^+."""
    return NystromFactorization(
        left=np.vstack([p.A, p.F]),
        core=pseudo_inverse(p.A),
        right=np.hstack([p.A, p.B]),
        partition=p,
    )


def reconstruct(f: NystromFactorization) -> DenseMatrix:
    """Dense M-hat in source index order.

    A, B and F are copied through unchanged and C is replaced by F A^+ B.
    This equals L A^+ R whenever A is nonsingular.
    """
    p = f.partition
    pivoted = np.vstack([
        np.hstack([p.A, p.B]),
        np.hstack([p.F, f.approximate_block()]),
    ])
    return restore_order(pivoted, p.row_order, p.col_order)
