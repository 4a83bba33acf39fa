"""Dense complex linear-algebra kernels.

Thin, contract-checking wrappers around LAPACK (through :mod:`numpy.linalg`).
Every routine is a pure function of its inputs.
"""

from typing import NamedTuple

import numpy as np

from ._validation import as_complex_matrix, as_complex_vector, check_square, spectral_norm
from .exceptions import NoConvergence, NotHermitian, NotPositiveDefinite, ZeroVector

HERMITIAN_RTOL = 1e-10
DEFAULT_RANK_TOL = 1e-10


class EigenDecomposition(NamedTuple):
    """Eigenvalues in ascending order and unit eigenvectors as columns."""

    values: np.ndarray
    vectors: np.ndarray


def hermitian_eig(H, tol=HERMITIAN_RTOL):
    """Full eigendecomposition of a Hermitian matrix.

    The input is symmetrized as ``(H + H^*) / 2`` after checking that its
    skew part is below ``tol * (1 + ||H||)``.

    Raises
    ------
    NotSquare, NotHermitian, NoConvergence
    """
    H = check_square(H, "H")
    scale = 1.0 + spectral_norm(H)
    if spectral_norm(H - H.conj().T) > tol * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    Hs = 0.5 * (H + H.conj().T)
    try:
        w, V = np.linalg.eigh(Hs)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK failure
        raise NoConvergence(str(exc)) from exc
    return EigenDecomposition(w, V)


def eigvalsh(H):
    """Ascending eigenvalues of the Hermitian part of ``H`` (no checks)."""
    return np.linalg.eigvalsh(0.5 * (H + H.conj().T))


def lambda_min(H):
    return float(eigvalsh(H)[0])


def lambda_max(H):
    return float(eigvalsh(H)[-1])


def svd(M):
    """Singular value decomposition ``M = U diag(s) V^*``.

    Returns
    -------
    U : ndarray
        Left singular vectors (unitary, full).
    s : ndarray
        Singular values in descending order.
    V : ndarray
        Right singular vectors as columns (unitary, full).
    """
    M = as_complex_matrix(M, "M")
    if M.size == 0:
        return (np.eye(M.shape[0], dtype=complex), np.zeros(0),
                np.eye(M.shape[1], dtype=complex))
    try:
        U, s, Vh = np.linalg.svd(M, full_matrices=True)
    except np.linalg.LinAlgError as exc:  # pragma: no cover
        raise NoConvergence(str(exc)) from exc
    return U, s, Vh.conj().T


def sigma_min(M):
    """Smallest singular value; 0 for matrices with more columns than rows."""
    M = np.asarray(M)
    if M.shape[1] == 0:
        return np.inf
    s = np.linalg.svd(M, compute_uv=False)
    if M.shape[0] < M.shape[1]:
        return 0.0
    return float(s[-1])


def null_space_basis(M, rank_tol=DEFAULT_RANK_TOL):
    """Orthonormal basis of ``ker(M)`` as the columns of an ``n x k`` array.

    A singular value counts as zero when it is at most ``rank_tol * sigma_max``.
    ``k = 0`` encodes a trivial kernel.
    """
    if not 0 < rank_tol < 1:
        raise ValueError("rank_tol must lie in (0, 1)")
    M = as_complex_matrix(M, "M")
    n = M.shape[1]
    if M.shape[0] == 0:
        return np.eye(n, dtype=complex)
    _, s, V = svd(M)
    smax = s[0] if s.size else 0.0
    rank = int(np.sum(s > rank_tol * smax)) if smax > 0 else 0
    return np.ascontiguousarray(V[:, rank:])


def kernel_intersection(*mats, rank_tol=DEFAULT_RANK_TOL):
    """Orthonormal basis of the common kernel of square matrices of equal size.

    Each matrix is scaled to unit norm before stacking so that one large
    matrix does not hide the kernel of a small one.
    """
    blocks = []
    for M in mats:
        nrm = spectral_norm(M)
        blocks.append(M / nrm if nrm > 0 else M)
    return null_space_basis(np.vstack(blocks), rank_tol)


def cholesky(H):
    """Lower-triangular ``L`` with ``H = L L^*``.

    Raises
    ------
    NotHermitian
        If ``H`` is not Hermitian within tolerance.
    NotPositiveDefinite
        If ``lambda_min(H) <= 1e-12 * (1 + ||H||)``.
    """
    H = check_square(H, "H")
    scale = 1.0 + spectral_norm(H)
    if spectral_norm(H - H.conj().T) > HERMITIAN_RTOL * scale:
        raise NotHermitian("matrix is not Hermitian within tolerance")
    Hs = 0.5 * (H + H.conj().T)
    if H.shape[0] == 0:
        return Hs
    if lambda_min(Hs) <= 1e-12 * scale:
        raise NotPositiveDefinite("matrix is not numerically positive definite")
    try:
        return np.linalg.cholesky(Hs)
    except np.linalg.LinAlgError as exc:
        raise NotPositiveDefinite(str(exc)) from exc


def vector_pseudoinverse(v):
    """Row covector ``v^dagger = v^* / ||v||^2`` of a nonzero vector."""
    v = as_complex_vector(v, "v")
    nrm2 = float(np.vdot(v, v).real)
    if nrm2 == 0.0:
        raise ZeroVector("pseudoinverse of the zero vector is not a left inverse")
    return v.conj() / nrm2


def numerical_rank(M, rtol=1e-9):
    """Number of singular values above ``rtol * sigma_max`` (0 for zero matrices)."""
    s = np.linalg.svd(np.asarray(M), compute_uv=False)
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s > rtol * s[0]))
