"""Rank-revealing QR column selection for wide s x k matrices.

Greedy column-pivoted QR picks the initial s columns. A bounded swap phase
then drives the selection towards a local mu-maximum volume: for the
selected block A1, W = A1^{-1} A has |W_ij| equal to the factor by which
|det A1| changes when selected column i is replaced by column j.
"""

import logging
from typing import Optional

import numpy as np
import scipy.linalg as sla

from src.linalg.core import MACHINE_EPS, as_matrix
from src.linalg.models import IndexSet
from src.sampling.models import InvalidSampleSizeError, RrqrPivots


logger = logging.getLogger(__name__)

MU: float = 1.0 + 1e-12


def rrqr_select(
    A: np.ndarray,
    s: int,
    swap_budget: Optional[int] = None,
    mu: float = MU,
) -> RrqrPivots:
    """Pick s columns of the s x k matrix A with sigma_s(A1) >= sigma_s(A)/sqrt(s(k-s)+1)."""
    A = as_matrix(A)
    rows, k = A.shape
    if rows > k:
        raise InvalidSampleSizeError(f"RRQR expects a wide matrix, got {rows}x{k}")
    if not 1 <= s <= min(rows, k):
        raise InvalidSampleSizeError(f"Cannot select {s} columns from a {rows}x{k} matrix")
    if swap_budget is None:
        swap_budget = 4 * s

    _, R, perm = sla.qr(A, mode="economic", pivoting=True)
    selected = [int(j) for j in perm[:s]]
    rest = [int(j) for j in perm[s:]]

    r00 = abs(R[0, 0]) if R.size else 0.0
    rank_tol = max(rows, k) * MACHINE_EPS * r00
    rank_deficient = r00 == 0 or abs(R[s - 1, s - 1]) <= rank_tol
    if rank_deficient:
        logger.warning(f"RRQR: matrix is numerically rank deficient below s={s}; skipping swaps")
        return RrqrPivots(indices=IndexSet(tuple(selected), k), rank_deficient=True)

    swaps = 0
    exhausted = False
    while rest:
        A1 = A[:, selected]
        W = sla.solve(A1, A[:, rest])
        i, j = np.unravel_index(int(np.argmax(np.abs(W))), W.shape)
        if abs(W[i, j]) <= mu:
            break
        if swaps >= swap_budget:
            exhausted = True
            logger.warning(
                f"RRQR swap budget {swap_budget} exhausted with improvement factor {abs(W[i, j]):.3f} left"
            )
            break
        selected[i], rest[j] = rest[j], selected[i]
        swaps += 1

    logger.debug(f"RRQR selected {s} of {k} columns after {swaps} swaps")
    return RrqrPivots(
        indices=IndexSet(tuple(selected), k),
        rank_deficient=False,
        swaps=swaps,
        budget_exhausted=exhausted,
    )
