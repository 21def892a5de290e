"""Dense matrix kernel: products, determinants, inverses, spectra, Hurwitz test.

Everything here is a thin, validated wrapper around LAPACK-backed numpy
routines.  Matrices are plain ``numpy.ndarray`` objects; all functions are
pure and never mutate their arguments.
"""

from __future__ import annotations

import numpy as np

from .errors import DimensionError, NumericalError, SingularMatrixError

# |det| below SINGULARITY_SCALE * (max |entry|)**n counts as singular.
SINGULARITY_SCALE = 1e-12


def as_matrix(m) -> np.ndarray:
    """Coerce to a 2-d ndarray and check finiteness."""
    a = np.asarray(m)
    if a.ndim != 2:
        raise DimensionError(f"expected a 2-d matrix, got ndim={a.ndim}")
    if not np.all(np.isfinite(a)):
        raise DimensionError("matrix contains non-finite entries")
    return a


def _require_square(a: np.ndarray) -> np.ndarray:
    if a.shape[0] != a.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {a.shape}")
    return a


def kron(a, b) -> np.ndarray:
    """Kronecker product of two matrices."""
    return np.kron(as_matrix(a), as_matrix(b))


def determinant(m) -> float:
    """Determinant via pivoted LU factorization."""
    a = _require_square(as_matrix(m))
    return np.linalg.det(a)


def singularity_threshold(a: np.ndarray) -> float:
    """Scale-aware cutoff below which |det| is treated as zero."""
    n = a.shape[0]
    scale = np.max(np.abs(a)) if a.size else 0.0
    return SINGULARITY_SCALE * scale**n


def inverse(m) -> np.ndarray:
    """Matrix inverse, rejecting inputs that are singular at working scale."""
    a = _require_square(as_matrix(m))
    det = determinant(a)
    if abs(det) < singularity_threshold(a):
        raise SingularMatrixError(
            f"matrix is singular: |det| = {abs(det):.3e}", det_magnitude=abs(det)
        )
    try:
        return np.linalg.inv(a)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - det guard above
        raise SingularMatrixError(str(exc), det_magnitude=abs(det)) from exc


def eigenvalues(m) -> np.ndarray:
    """Full complex spectrum of a square matrix, multiplicities included."""
    a = _require_square(as_matrix(m))
    try:
        return np.linalg.eigvals(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"eigenvalue iteration failed: {exc}") from exc


def is_hurwitz(m, margin: float = 0.0) -> bool:
    """True iff every eigenvalue has real part < -margin."""
    if margin < 0:
        raise ValueError(f"margin must be >= 0, got {margin}")
    return bool(np.all(eigenvalues(m).real < -margin))
