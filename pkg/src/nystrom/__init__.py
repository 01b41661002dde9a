"""Nystrom package - out-of-sample extension and canonical decompositions."""

from src.nystrom.decompositions import (
    decompose,
    evd_general,
    evd_single_step,
    svd_general,
    svd_single_step,
    symmetric_svd_general,
    symmetric_svd_single_step,
)
from src.nystrom.extension import extend_evd, extend_svd, factorize, reconstruct
from src.nystrom.models import (
    AsymmetricInputError,
    CanonicalDecomposition,
    ComplexSpectrum,
    DefectiveEigenbasis,
    ExtendedVectors,
    IndefiniteSampleError,
    NegativeEigenvalue,
    NoRealSquareRoot,
    NystromError,
    NystromFactorization,
    PivotMismatchError,
    SingularSample,
    ZeroEigenvalue,
)
