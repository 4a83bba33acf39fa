"""Input validation helpers shared by the functional API and the estimators."""

import numpy as np

from .exceptions import DimensionMismatch, NotSquare, ZeroVector

#: default relative tolerance for structure checks
STRUCTURE_RTOL = 1e-10


def as_complex_matrix(M, name="matrix"):
    """Return ``M`` as a finite 2-D complex ndarray (copying only if needed)."""
    arr = np.asarray(M)
    if arr.ndim != 2:
        raise DimensionMismatch(f"{name} must be 2-D, got shape {arr.shape}")
    arr = arr.astype(complex, copy=False)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    return arr


def check_square(M, name="matrix"):
    arr = as_complex_matrix(M, name)
    if arr.shape[0] != arr.shape[1]:
        raise NotSquare(f"{name} must be square, got shape {arr.shape}")
    return arr


def check_pair(A, E):
    """Validate a pencil pair and return both as complex square arrays."""
    A = check_square(A, "A")
    E = check_square(E, "E")
    if A.shape != E.shape:
        raise DimensionMismatch(f"A and E differ in shape: {A.shape} vs {E.shape}")
    return A, E


def check_same_size(*mats, names=None):
    out = []
    for i, M in enumerate(mats):
        name = names[i] if names else f"matrix {i}"
        out.append(check_square(M, name))
    sizes = {M.shape[0] for M in out}
    if len(sizes) > 1:
        raise DimensionMismatch(f"matrices have different sizes: {sorted(sizes)}")
    return out


def as_complex_vector(v, name="vector", nonzero=False):
    arr = np.asarray(v).astype(complex, copy=False).reshape(-1)
    if not np.all(np.isfinite(arr)):
        raise ValueError(f"{name} contains NaN or Inf")
    if nonzero and np.linalg.norm(arr) == 0:
        raise ZeroVector(f"{name} must be nonzero")
    return arr


def spectral_norm(M):
    M = np.asarray(M)
    if M.size == 0:
        return 0.0
    return float(np.linalg.norm(M, 2))


def hermitian_defect(M):
    """Relative distance of ``M`` from the Hermitian matrices."""
    return spectral_norm(M - M.conj().T) / (1.0 + spectral_norm(M))


def skew_defect(M):
    return spectral_norm(M + M.conj().T) / (1.0 + spectral_norm(M))


def is_hermitian(M, rtol=STRUCTURE_RTOL):
    return hermitian_defect(M) <= rtol


def is_skew_hermitian(M, rtol=STRUCTURE_RTOL):
    return skew_defect(M) <= rtol


def min_eigenvalue_margin(M):
    """``lambda_min`` of the Hermitian part of ``M``, scaled by ``1 + ||M||``."""
    H = 0.5 * (M + M.conj().T)
    return float(np.linalg.eigvalsh(H)[0]) / (1.0 + spectral_norm(M))


def is_psd(M, rtol=STRUCTURE_RTOL):
    return is_hermitian(M, rtol) and min_eigenvalue_margin(M) >= -rtol
