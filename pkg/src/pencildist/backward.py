"""Eigenvalue backward errors and the lower bounds on the distance to singularity.

A pencil ``A + sE`` is singular exactly when ``det(A + lambda E)`` vanishes
at ``n + 1`` distinct points. Every perturbation that makes the pencil
singular therefore costs at least the backward error ``eta(lambda)`` at each
point, and the maximum over any admissible family of points is a lower
bound on the distance to singularity.

All backward errors use the norm ``sqrt(||Delta_A||^2 + ||Delta_E||^2)``.
"""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._parallel import map_ordered
from ._validation import check_pair, spectral_norm
from .exceptions import (
    FamilyConstructionFailed,
    LambdaNotAdmissible,
    NoConvergence,
    UnsupportedTag,
    Unbounded,
)
from .linalg import sigma_min, svd
from .model import PALINDROMIC, StructuredPencil, StructureTag, ensure_valid, star_op
from .optimize import AffineHermitianFamily, minimize_lambda2_coupled, minimize_lambda_max_affine

#: L(lambda) counts as invertible when sigma_min exceeds this times the scale
ADMISSIBLE_RTOL = 1e-10
#: minimal separation of family points
MIN_GAP = 1e-8
#: |Im lambda| below this times (1 + |lambda|) counts as real
REAL_RTOL = 1e-12


def _scale(A, E, lam):
    return 1.0 + spectral_norm(A) + abs(lam) * spectral_norm(E)


def _margin(A, E, lam):
    return sigma_min(A + lam * E) / _scale(A, E, lam)


def _resolvent(A, E, lam):
    """``M = (A + lambda E)^{-1}``, rejecting points where ``L(lambda)`` is numerically singular."""
    if not np.isfinite(lam):
        raise LambdaNotAdmissible(f"lambda={lam} is not finite")
    L = A + lam * E
    if sigma_min(L) <= ADMISSIBLE_RTOL * _scale(A, E, lam):
        raise LambdaNotAdmissible(f"L({lam}) is numerically singular")
    return np.linalg.solve(L, np.eye(L.shape[0], dtype=complex))


def _is_real(lam):
    return abs(complex(lam).imag) <= REAL_RTOL * (1.0 + abs(lam))


@dataclass
class LambdaFamily:
    """Distinct points at which ``A + lambda E`` is invertible."""

    points: np.ndarray
    margins: np.ndarray
    seed: int = 0
    rejections: int = 0

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    @property
    def min_gap(self):
        p = self.points
        if p.size < 2:
            return np.inf
        d = np.abs(p[:, None] - p[None, :])
        return float(d[~np.eye(p.size, dtype=bool)].min())


@dataclass
class BackwardErrorResult:
    """Backward error ``eta`` at ``lam``.

    ``inner_minimizer`` is the optimal ``t`` of the inner eigenvalue
    problem (empty for the unstructured case). ``certificate`` holds a
    perturbation pair attaining ``eta`` when one is available.
    """

    lam: complex
    eta: float
    inner_minimizer: np.ndarray = field(default_factory=lambda: np.zeros(0))
    certificate: Optional[dict] = None
    structure: str = "unstructured"
    flags: set = field(default_factory=set)
    info: dict = field(default_factory=dict)

    def certificate_residual(self, A, E):
        """``sigma_min((A - Delta_A) + lam (E - Delta_E))``."""
        if self.certificate is None:
            return None
        dA, dE = self.certificate["A"], self.certificate["E"]
        return sigma_min((A - dA) + self.lam * (E - dE))


def _admissible(A, E, lam, need_nonreal):
    try:
        _resolvent(A, E, lam)
    except LambdaNotAdmissible:
        return False
    return not (need_nonreal and _is_real(lam))


def _nonreal_requirement(tag):
    """Function telling whether ``lam`` is excluded for this structure."""
    tag = StructureTag.parse(tag)
    if tag in (StructureTag.HERMITIAN, StructureTag.SKEW_HERMITIAN):
        return _is_real
    if tag in (StructureTag.STAR_EVEN, StructureTag.STAR_ODD):
        return lambda lam: _is_real(-1j * lam)
    return lambda lam: False


def choose_lambda_family(pencil, count=None, seed=0, max_rejections=None):
    """Admissible points on the circle of radius ``1 + ||A|| / (1 + ||E||)``.

    Point ``k`` sits at angle ``2 pi k / count`` plus a deterministic,
    seed-dependent jitter. A point is rejected and redrawn when
    ``L(lambda)`` is numerically singular, when it is too close to an
    accepted point, or when the structure needs it off the real (or
    imaginary) axis.

    Parameters
    ----------
    pencil : StructuredPencil or (A, E)
    count : int, optional
        At least ``n + 1``; defaults to ``n + 1``.

    Raises
    ------
    FamilyConstructionFailed
        After ``100 * count`` rejections, which happens for (nearly)
        singular pencils.
    """
    if isinstance(pencil, StructuredPencil):
        A, E, tag = pencil.A, pencil.E, pencil.tag
    else:
        A, E = check_pair(*pencil)
        tag = StructureTag.UNSTRUCTURED
    n = A.shape[0]
    count = n + 1 if count is None else int(count)
    if count < n + 1:
        raise ValueError(f"count must be at least n + 1 = {n + 1}")
    if max_rejections is None:
        max_rejections = 100 * count
    excluded = _nonreal_requirement(tag)
    radius = 1.0 + spectral_norm(A) / (1.0 + spectral_norm(E))
    rng = np.random.default_rng(seed)
    width = 2.0 * np.pi / count
    points, margins = [], []
    rejections = 0
    k = 0
    while k < count:
        theta = width * (k + 0.5 + rng.uniform(-0.4, 0.4))
        lam = complex(radius * np.exp(1j * theta))
        ok = not excluded(lam) and all(abs(lam - p) > MIN_GAP for p in points)
        if ok:
            m = _margin(A, E, lam)
            ok = m > ADMISSIBLE_RTOL
        if ok:
            points.append(lam)
            margins.append(m)
            k += 1
            continue
        rejections += 1
        if rejections >= max_rejections:
            raise FamilyConstructionFailed(
                f"{rejections} points rejected; the pencil looks (nearly) singular")
    return LambdaFamily(np.array(points), np.array(margins), seed=seed, rejections=rejections)


def family_from_points(pencil, points):
    """Wrap user-supplied points, checking distinctness and invertibility."""
    if isinstance(pencil, StructuredPencil):
        A, E = pencil.A, pencil.E
    else:
        A, E = check_pair(*pencil)
    pts = np.asarray(points, dtype=complex).reshape(-1)
    fam = LambdaFamily(pts, np.array([_margin(A, E, p) for p in pts]))
    if fam.min_gap <= MIN_GAP:
        raise LambdaNotAdmissible("family points are not distinct")
    return fam


# -- unstructured ------------------------------------------------------------------

def _stacked_gram(M, lam):
    """``[I; conj(lam) I] M^* M [I, lam I]``."""
    n = M.shape[0]
    B = np.hstack([np.eye(n), lam * np.eye(n)])
    H = B.conj().T @ (M.conj().T @ M) @ B
    return 0.5 * (H + H.conj().T)


def eta_unstructured(A, E, lam, certificate=True):
    """``eta(lambda) = sigma_min(L(lambda)) / sqrt(1 + |lambda|^2)``.

    The value is computed from ``lambda_max(H)`` with
    ``H = [I; conj(lambda) I] M^* M [I, lambda I]`` and ``M = L(lambda)^{-1}``;
    the closed form is stored in ``info['closed_form']``. The certificate is
    the rank-one pair ``Delta_A = s u v^* / (1 + |lambda|^2)``,
    ``Delta_E = conj(lambda) Delta_A`` built from the smallest singular
    triple ``(s, u, v)`` of ``L(lambda)``.

    Examples
    --------
    >>> import numpy as np
    >>> r = eta_unstructured(np.eye(2), np.zeros((2, 2)), 2.0)
    >>> round(r.eta ** 2, 12)
    0.2
    """
    A, E = check_pair(A, E)
    lam = complex(lam)
    M = _resolvent(A, E, lam)
    H = _stacked_gram(M, lam)
    top = float(np.linalg.eigvalsh(H)[-1])
    eta = 1.0 / np.sqrt(top)
    U, s, V = svd(A + lam * E)
    smin = float(s[-1])
    closed = smin / np.sqrt(1.0 + abs(lam) ** 2)
    cert = None
    if certificate:
        dA = (smin / (1.0 + abs(lam) ** 2)) * np.outer(U[:, -1], V[:, -1].conj())
        cert = {"A": dA, "E": np.conj(lam) * dA}
    return BackwardErrorResult(lam, float(eta), certificate=cert, structure="unstructured",
                               info={"closed_form": float(closed), "lambda_max": top})


# -- Hermitian and related -----------------------------------------------------------

def hermitian_blocks(M, lam):
    """``(G, H1, H2)`` of the Hermitian backward error at ``lam``."""
    n = M.shape[0]
    Mh = M.conj().T
    Z = np.zeros((n, n), dtype=complex)
    G = _stacked_gram(M, lam)
    H1 = 1j * np.block([[M - Mh, lam * M], [-np.conj(lam) * Mh, Z]])
    H2 = 1j * np.block([[Z, -Mh], [M, lam * M - np.conj(lam) * Mh]])
    return G, H1, H2


def _inverse_min_lambda_max(G, dirs, seed=0, scale=1.0):
    """``(1 / min_t lambda_max(G + sum t_i H_i), t, flags)``."""
    fam = AffineHermitianFamily(G, dirs)
    try:
        t, val, trace = minimize_lambda_max_affine(fam, seed=seed)
    except Unbounded as exc:
        raise NoConvergence(f"inner minimization is unbounded: {exc}") from exc
    if not val > 0.0:
        raise NoConvergence(f"inner minimum {val} is not positive")
    return scale / val, np.asarray(t, dtype=float), set(trace.flags)


def eta_hermitian(A, E, lam, seed=0):
    """Hermitian backward error at a non-real ``lam``.

    ``eta^2 = 1 / min_{t0, t1} lambda_max(G + t0 H1 + t1 H2)`` with
    ``G = [I; conj(lam) I] M^* M [I, lam I]``,
    ``H1 = i [[M - M^*, lam M], [-conj(lam) M^*, 0]]``,
    ``H2 = i [[0, -M^*], [M, lam M - conj(lam) M^*]]`` and ``M = L(lam)^{-1}``.

    Raises
    ------
    LambdaNotAdmissible
        For real ``lam`` or a singular ``L(lam)``.
    """
    A, E = check_pair(A, E)
    lam = complex(lam)
    if _is_real(lam):
        raise LambdaNotAdmissible(f"lambda={lam} must be non-real")
    M = _resolvent(A, E, lam)
    G, H1, H2 = hermitian_blocks(M, lam)
    eta2, t, flags = _inverse_min_lambda_max(G, [H1, H2], seed=seed)
    return BackwardErrorResult(lam, float(np.sqrt(eta2)), inner_minimizer=t,
                               structure="hermitian", flags=flags,
                               info={"t_norm": float(np.linalg.norm(t))})


def related_to_hermitian(A, E, lam, tag):
    """``(A', E', lam')`` with ``A' + lam' E'`` Hermitian and a unimodular multiple of ``A + lam E``."""
    tag = StructureTag.parse(tag)
    if tag is StructureTag.SKEW_HERMITIAN:
        return 1j * A, 1j * E, lam
    if tag is StructureTag.STAR_EVEN:
        return A, 1j * E, -1j * lam
    if tag is StructureTag.STAR_ODD:
        # iA + (-i lam)(-E) = i (A + lam E)
        return 1j * A, -E, -1j * lam
    raise UnsupportedTag(f"no Hermitian reduction for {tag.value}")


def eta_related(A, E, lam, tag, seed=0):
    """Backward error for skew-Hermitian, ``*``-even and ``*``-odd pencils.

    Each structure is a unimodular rescaling of a Hermitian one (and of its
    parameter), which leaves the norm of every perturbation unchanged:

    ====================  =====================================
    skew-Hermitian        ``eta_hermitian(iA, iE, lam)``
    ``*``-even            ``eta_hermitian(A, iE, -i lam)``
    ``*``-odd             ``eta_hermitian(iA, -E, -i lam)``
    ====================  =====================================
    """
    tag = StructureTag.parse(tag)
    A, E = check_pair(A, E)
    A2, E2, lam2 = related_to_hermitian(A, E, complex(lam), tag)
    r = eta_hermitian(A2, E2, lam2, seed=seed)
    r.lam = complex(lam)
    r.structure = tag.value
    r.info["hermitian_lambda"] = complex(lam2)
    return r


# -- palindromic -------------------------------------------------------------------

def palindromic_blocks(A, lam, star):
    """``(G, C, Gamma_inv)`` of the palindromic backward error at ``lam``."""
    A = np.asarray(A, dtype=complex)
    n = A.shape[0]
    As = star_op(A, star)
    M = _resolvent(A, As, lam)
    Ms = star_op(M, star)
    Z = np.zeros((n, n), dtype=complex)
    C = np.block([[Ms, Z], [np.conj(lam) * Ms - M, -lam * M]])
    a = abs(lam)
    if a == 0.0:
        raise LambdaNotAdmissible("lambda = 0 makes the weighting singular")
    g = np.concatenate([np.full(n, np.sqrt(1.0 + a)), np.full(n, np.sqrt((1.0 + a) / a))])
    G = g[:, None] * _stacked_gram(M, lam) * g[None, :]
    return 0.5 * (G + G.conj().T), C, g


def eta_palindromic(A, lam, star="*", seed=0):
    """Palindromic backward error for ``A + s A^star`` at ``lam``.

    With ``M = L(lam)^{-1}``,
    ``C = [[M^star, 0], [conj(lam) M^star - M, -lam M]]``,
    ``Gamma = diag(sqrt(1 / (1 + |lam|)) I, sqrt(|lam| / (1 + |lam|)) I)`` and
    ``G = Gamma^{-1} [I; conj(lam) I] M^* M [I, lam I] Gamma^{-1}``:

    * ``star='*'``: ``eta^2 = 2 / min_{t1, t2} lambda_max(G + t1 H1 + t2 H2)``,
      ``H1 = Gamma^{-1} (C + C^*) Gamma^{-1}``, ``H2 = i Gamma^{-1} (C - C^*) Gamma^{-1}``.
    * ``star='T'``: ``eta^2 = 2 / min_{t >= 0} lambda_2([[G, t conj(S)], [t S, G]])``,
      ``S = Gamma^{-1} (C + C^T) Gamma^{-1}``, ``lambda_2`` the second largest eigenvalue.

    Notes
    -----
    For ``star='T'`` the closed formula can deviate from the attained
    backward error by a few percent in either direction;
    :func:`pencildist.oracle.sample_backward_error` minimizes over null
    vectors directly and can be used to check a given point.
    """
    if star not in ("*", "T"):
        raise ValueError("star must be '*' or 'T'")
    lam = complex(lam)
    G, C, g = palindromic_blocks(A, lam, star)
    W = np.outer(g, g)
    if star == "*":
        H1 = W * (C + C.conj().T)
        H2 = 1j * W * (C - C.conj().T)
        eta2, t, flags = _inverse_min_lambda_max(G, [H1, H2], seed=seed, scale=2.0)
    else:
        S = W * (C + C.T)
        tbest, val, trace = minimize_lambda2_coupled(G, S)
        if not val > 0.0:
            raise NoConvergence(f"inner minimum {val} is not positive")
        eta2, t, flags = 2.0 / val, np.array([tbest]), set(trace.flags)
    tag = StructureTag.STAR_PALINDROMIC if star == "*" else StructureTag.T_PALINDROMIC
    return BackwardErrorResult(lam, float(np.sqrt(eta2)), inner_minimizer=t,
                               structure=tag.value, flags=flags,
                               info={"t_norm": float(np.linalg.norm(t))})


# -- dispatch and bounds -------------------------------------------------------------

def eta(pencil, lam, seed=0):
    """Backward error appropriate for the pencil's tag."""
    A, E, tag = pencil.A, pencil.E, pencil.tag
    if tag is StructureTag.UNSTRUCTURED:
        return eta_unstructured(A, E, lam)
    if tag is StructureTag.HERMITIAN:
        return eta_hermitian(A, E, lam, seed=seed)
    if tag in (StructureTag.SKEW_HERMITIAN, StructureTag.STAR_EVEN, StructureTag.STAR_ODD):
        return eta_related(A, E, lam, tag, seed=seed)
    if tag in PALINDROMIC:
        return eta_palindromic(A, lam, tag.star, seed=seed)
    raise UnsupportedTag(f"no backward error for {tag.value}")


@dataclass
class LowerBoundResult:
    """Maximum of the backward errors over a family of points."""

    value: float
    structure: str
    per_point: list
    skipped: list = field(default_factory=list)

    @property
    def argmax(self):
        if not self.per_point:
            return None
        return max(self.per_point, key=lambda r: r.eta).lam


def _as_pencil(pencil, tag=None):
    if isinstance(pencil, StructuredPencil):
        if tag is None or StructureTag.parse(tag) is pencil.tag:
            return pencil
        return StructuredPencil(pencil.A, pencil.E, StructureTag.parse(tag))
    A, E = check_pair(*pencil)
    return StructuredPencil(A, E, StructureTag.parse(tag or "unstructured"))


def _family_max(func, points, structure):
    def one(lam):
        try:
            return func(lam)
        except (LambdaNotAdmissible, NoConvergence) as exc:
            return (complex(lam), str(exc))

    results = map_ordered(one, list(points))
    good = [r for r in results if isinstance(r, BackwardErrorResult)]
    skipped = [r for r in results if not isinstance(r, BackwardErrorResult)]
    value = max((r.eta for r in good), default=0.0)
    return LowerBoundResult(float(value), structure, good, skipped)


def delta_lower_bound(pencil, family=None, tag=None, seed=0):
    """``max_i eta(lambda_i)``: a lower bound on the (structured) distance to singularity.

    Points at which the backward error is not defined are skipped and
    listed in ``skipped``; the bound stays valid over the remaining points.
    """
    p = _as_pencil(pencil, tag)
    if tag is not None or isinstance(pencil, StructuredPencil):
        ensure_valid(p)
    if family is None:
        family = choose_lambda_family(p, seed=seed)
    points = family.points if isinstance(family, LambdaFamily) else family
    return _family_max(lambda lam: eta(p, lam, seed=seed), points, p.tag.value)


def _one_sided_eta(A, E, lam, which, structure, seed=0):
    M = _resolvent(A, E, lam)
    lam = complex(lam)
    if structure == "unstructured":
        top = float(np.linalg.eigvalsh(M.conj().T @ M)[-1])
        val = 1.0 / top if which == "A" else (np.inf if lam == 0 else 1.0 / (abs(lam) ** 2 * top))
        return BackwardErrorResult(lam, float(np.sqrt(val)), structure=structure,
                                   info={"matrix": which})
    if _is_real(lam):
        raise LambdaNotAdmissible(f"lambda={lam} must be non-real")
    Mh = M.conj().T
    if which == "A":
        G, H = Mh @ M, 1j * (M - Mh)
    else:
        G, H = abs(lam) ** 2 * (Mh @ M), 1j * (lam * M - np.conj(lam) * Mh)
    G = 0.5 * (G + G.conj().T)
    H = 0.5 * (H + H.conj().T)
    val, t, flags = _inverse_min_lambda_max(G, [H], seed=seed)
    return BackwardErrorResult(lam, float(np.sqrt(val)), inner_minimizer=t,
                               structure=structure, flags=flags, info={"matrix": which})


def _one_sided_bound(pencil, family, tag, which, seed):
    p = _as_pencil(pencil, tag)
    structure = p.tag.value
    if p.tag not in (StructureTag.UNSTRUCTURED, StructureTag.HERMITIAN):
        raise UnsupportedTag("one-sided bounds exist for unstructured and Hermitian pencils")
    if p.tag is StructureTag.HERMITIAN:
        ensure_valid(p)
    if which == "E" and sigma_min(p.A) > ADMISSIBLE_RTOL * (1.0 + spectral_norm(p.A)):
        # E alone cannot make the pencil singular while A stays invertible
        return LowerBoundResult(np.inf, structure, [], [])
    if family is None:
        family = choose_lambda_family(p, seed=seed)
    points = family.points if isinstance(family, LambdaFamily) else family
    return _family_max(lambda lam: _one_sided_eta(p.A, p.E, lam, which, structure, seed),
                       points, structure)


def delta_A_lower(pencil, family=None, tag=None, seed=0):
    """Lower bound on the distance when only ``A`` is perturbed.

    Unstructured: ``max_i 1 / sqrt(lambda_max(M_i^* M_i))``. Hermitian:
    ``max_i (min_t lambda_max(M_i^* M_i + t i (M_i - M_i^*)))^{-1/2}``.
    """
    return _one_sided_bound(pencil, family, tag, "A", seed)


def delta_E_lower(pencil, family=None, tag=None, seed=0):
    """Lower bound on the distance when only ``E`` is perturbed.

    ``inf`` when ``A`` is invertible. Otherwise, unstructured:
    ``max_i 1 / (|lambda_i| sqrt(lambda_max(M_i^* M_i)))``; Hermitian:
    ``max_i (min_t lambda_max(|lambda_i|^2 M_i^* M_i
    + t i (lambda_i M_i - conj(lambda_i) M_i^*)))^{-1/2}``.
    """
    return _one_sided_bound(pencil, family, tag, "E", seed)


__all__ = [
    "LambdaFamily",
    "BackwardErrorResult",
    "LowerBoundResult",
    "choose_lambda_family",
    "family_from_points",
    "eta_unstructured",
    "eta_hermitian",
    "eta_related",
    "eta_palindromic",
    "eta",
    "hermitian_blocks",
    "palindromic_blocks",
    "related_to_hermitian",
    "delta_lower_bound",
    "delta_A_lower",
    "delta_E_lower",
]
