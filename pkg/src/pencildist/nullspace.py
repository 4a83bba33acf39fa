"""Distances of a pencil ``A + sE`` to pencils with a common null vector.

All values are measured as ``sqrt(||Delta_A||^2 + ||Delta_E||^2)`` in the
spectral norm; perturbed matrices are ``A - Delta_A`` and ``E - Delta_E``.
"""

import numpy as np

from ._validation import check_pair, check_square, spectral_norm
from .exceptions import UnsupportedTag
from .linalg import hermitian_eig, null_space_basis, svd
from .mappings import general_map, hermitian_map, skew_hermitian_map, two_sided_map
from .model import (
    PALINDROMIC,
    DistanceReport,
    StructuredPencil,
    StructureTag,
    ensure_valid,
    star_op,
)
from .optimize import AffineHermitianFamily, maximize_lambda_min_box



def _report(value, dA, dE, v, A, E, structure, kind, **info):
    return DistanceReport(
        value=float(value),
        perturbations={} if dA is None else {"A": dA, "E": dE},
        witness=v,
        inputs={"A": A, "E": E},
        sign=-1,
        structure=structure,
        kind=kind,
        info=info,
    )


def delta0_unstructured(A, E):
    """``sqrt(lambda_min(A^* A + E^* E))`` with rank-one minimizers.

    The witness ``v`` is a unit eigenvector of ``A^* A + E^* E`` for its
    smallest eigenvalue; ``Delta_A = A v v^*`` and ``Delta_E = E v v^*``.

    Examples
    --------
    >>> import numpy as np
    >>> r = delta0_unstructured(np.diag([1., 2.]), np.diag([3., 4.]))
    >>> round(r.value ** 2, 12)
    10.0
    """
    A, E = check_pair(A, E)
    w, V = hermitian_eig(A.conj().T @ A + E.conj().T @ E)
    v = V[:, 0]
    value = np.sqrt(max(w[0], 0.0))
    return _report(value, general_map(v, A @ v), general_map(v, E @ v), v, A, E,
                   "unstructured", "null-space", lambda_min=float(w[0]))


def _one_sided(X, Y, rank_tol):
    """Perturb ``X`` only so that ``X - Delta`` shares a null vector with ``Y``."""
    U = null_space_basis(Y, rank_tol)
    if U.shape[1] == 0:
        return np.inf, None, None
    _, s, V = svd(X @ U)
    k = U.shape[1]
    smin = s[-1] if s.size >= k else 0.0
    x = U @ V[:, k - 1]
    x = x / np.linalg.norm(x)
    return float(smin), general_map(x, X @ x), x


def delta0_A_only(A, E, rank_tol=1e-10):
    """Distance when only ``A`` may be perturbed: ``sigma_min(A U)``, ``U`` spanning ``ker E``.

    Infinite when ``E`` is nonsingular.
    """
    A, E = check_pair(A, E)
    value, dA, x = _one_sided(A, E, rank_tol)
    if dA is None:
        return _report(np.inf, None, None, None, A, E, "unstructured", "null-space-A")
    return _report(value, dA, np.zeros_like(E), x, A, E, "unstructured", "null-space-A",
                   kernel_dim=int(null_space_basis(E, rank_tol).shape[1]))


def delta0_E_only(A, E, rank_tol=1e-10):
    """Distance when only ``E`` may be perturbed; mirror of :func:`delta0_A_only`."""
    A, E = check_pair(A, E)
    value, dE, x = _one_sided(E, A, rank_tol)
    if dE is None:
        return _report(np.inf, None, None, None, A, E, "unstructured", "null-space-E")
    return _report(value, np.zeros_like(A), dE, x, A, E, "unstructured", "null-space-E",
                   kernel_dim=int(null_space_basis(A, rank_tol).shape[1]))


_HERM_KINDS = {
    # tag: (map for Delta_A, map for Delta_E)
    StructureTag.HERMITIAN: (hermitian_map, hermitian_map),
    StructureTag.SKEW_HERMITIAN: (skew_hermitian_map, skew_hermitian_map),
    StructureTag.STAR_EVEN: (hermitian_map, skew_hermitian_map),
    StructureTag.STAR_ODD: (skew_hermitian_map, hermitian_map),
}


def delta0_structured(pencil, rtol=1e-10):
    """Structured distance to a common null space.

    For the Hermitian family (Hermitian, skew-Hermitian, ``*``-even,
    ``*``-odd) the value coincides with the unstructured one; the returned
    perturbations are the minimal structured maps sending the witness ``v``
    to ``Av`` and ``Ev``. Palindromic pencils go to
    :func:`delta0_palindromic`.

    Raises
    ------
    InvalidStructure
        If the pencil violates its tag.
    """
    if not isinstance(pencil, StructuredPencil):
        raise TypeError("expected a StructuredPencil")
    ensure_valid(pencil, rtol)
    tag = pencil.tag
    A, E = pencil.A, pencil.E
    if tag is StructureTag.UNSTRUCTURED:
        return delta0_unstructured(A, E)
    if tag in PALINDROMIC:
        return delta0_palindromic(A, tag.star)
    if tag not in _HERM_KINDS:
        raise UnsupportedTag(f"use the DH module for {tag.value}")
    base = delta0_unstructured(A, E)
    v = base.witness
    map_A, map_E = _HERM_KINDS[tag]
    # the tag guarantees feasibility; rounding in v^* A v is not a reason to fail
    dA = map_A(v, A @ v, rtol=np.inf)
    dE = map_E(v, E @ v, rtol=np.inf)
    return _report(base.value, dA, dE, v, A, E, tag.value, "null-space",
                   lambda_min=base.info["lambda_min"])


def _stationary_vector(W, D):
    """Unit ``v`` in ``span(W)`` with ``v^* D v = 0`` (or closest to it)."""
    if W.shape[1] == 1:
        return W[:, 0]
    M = W.conj().T @ D @ W
    mu, P = np.linalg.eigh(0.5 * (M + M.conj().T))
    if mu[0] <= 0.0 <= mu[-1] and mu[-1] > mu[0]:
        c2 = mu[-1] / (mu[-1] - mu[0])
        beta = np.sqrt(c2) * P[:, 0] + np.sqrt(1.0 - c2) * P[:, -1]
    else:
        beta = P[:, int(np.argmin(np.abs(mu)))]
    v = W @ beta
    return v / np.linalg.norm(v)


def _palindromic_gram(A, star):
    As = star_op(A, star)
    K0 = As.conj().T @ As
    K1 = A.conj().T @ A
    return 0.5 * (K0 + K0.conj().T), 0.5 * (K1 + K1.conj().T)


def palindromic_objective(A, star, gamma):
    """``lambda_min((A^star)^* A^star + gamma (A^* A - (A^star)^* A^star))``."""
    K0, K1 = _palindromic_gram(np.asarray(A, dtype=complex), star)
    return float(np.linalg.eigvalsh(K0 + gamma * (K1 - K0))[0])


def delta0_palindromic(A, star="*", tol=1e-10):
    """Palindromic distance for ``A + s A^star``.

    ``value^2 = 2 sup_{gamma in [0,1]} lambda_min((A^star)^* A^star +
    gamma (A^* A - (A^star)^* A^star))``. The witness ``v`` satisfies
    ``||A v|| = ||A^star v||`` and the optimal ``Delta_A`` is the minimal
    two-sided map with ``Delta_A v = A v``, ``Delta_A^star v = A^star v``;
    ``Delta_E = Delta_A^star``.

    Returns
    -------
    DistanceReport
        ``info`` holds ``gamma`` and the stationarity residual
        ``v^* (A^* A - (A^star)^* A^star) v``.
    """
    A = check_square(A, "A")
    if star not in ("*", "T"):
        raise ValueError(f"star must be '*' or 'T', got {star!r}")
    As = star_op(A, star)
    K0, K1 = _palindromic_gram(A, star)
    D = K1 - K0

    fam = AffineHermitianFamily(K0, [D])
    point, lam, trace = maximize_lambda_min_box(fam, [(0.0, 1.0)], tol=tol)
    gamma = float(point[0])
    w, V = np.linalg.eigh(fam(point))
    # eigenvalues that cross at the maximizer differ by about tol * ||D||
    ctol = 10.0 * tol * spectral_norm(D) + 1e-13 * (1.0 + spectral_norm(K0))
    cluster = int(np.sum(w - w[0] <= ctol))
    v = _stationary_vector(V[:, :cluster], D)
    lam = float(w[0])
    value = np.sqrt(2.0 * max(lam, 0.0))
    dA = two_sided_map(v, A @ v, As @ v, star, rtol=np.inf)
    if cluster > 1:
        trace.flags.add("multiplicity")
    tag = StructureTag.STAR_PALINDROMIC if star == "*" else StructureTag.T_PALINDROMIC
    rep = _report(value, dA, star_op(dA, star), v, A, As, tag.value, "null-space",
                  gamma=float(gamma), lambda_min=lam,
                  stationarity=float(np.vdot(v, D @ v).real), cluster=cluster)
    rep.trace = trace
    return rep


def delta0(pencil):
    """Dispatch on the pencil tag (the structured distance for structured tags)."""
    return delta0_structured(pencil)


def upper_bound_trivial(A, E):
    """``sqrt(||A||^2 + ||E||^2)``, attained by ``Delta_A = A``, ``Delta_E = E``."""
    return float(np.hypot(spectral_norm(A), spectral_norm(E)))


__all__ = [
    "delta0_unstructured",
    "delta0_A_only",
    "delta0_E_only",
    "delta0_structured",
    "delta0_palindromic",
    "palindromic_objective",
    "delta0",
    "upper_bound_trivial",
]
