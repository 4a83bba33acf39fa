"""Common null space distances for matrix polynomials ``P(s) = sum_j s^j A_j``."""

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._validation import spectral_norm
from .exceptions import NotPalindromic, UnsupportedTag
from .mappings import general_map, hermitian_map, self_star_map, skew_hermitian_map, two_sided_map
from .model import (
    PALINDROMIC,
    DistanceReport,
    MatrixPolynomial,
    StructureTag,
    ensure_valid,
    star_op,
    validate,
)
from .optimize import AffineHermitianFamily, OptimizerTrace, maximize_lambda_min_box

#: eigenvalue gap above which lambda_min counts as simple
SIMPLICITY_GAP = 1e-8


def _coefficient_kind(tag, j):
    """``'herm'``, ``'skew'`` or ``None`` for coefficient ``j`` under ``tag``."""
    if tag is StructureTag.HERMITIAN:
        return "herm"
    if tag is StructureTag.SKEW_HERMITIAN:
        return "skew"
    if tag is StructureTag.STAR_EVEN:
        return "herm" if j % 2 == 0 else "skew"
    if tag is StructureTag.STAR_ODD:
        return "skew" if j % 2 == 0 else "herm"
    return None


def _keys(m):
    return [f"A{j}" for j in range(m + 1)]


def poly_delta0(P, rtol=1e-10):
    """Distance of ``P`` to polynomials whose coefficients share a null vector.

    ``value = sqrt(lambda_min(sum_j A_j^* A_j))`` for the unstructured,
    Hermitian, skew-Hermitian, ``*``-even and ``*``-odd structures; the
    structured perturbations are minimal Hermitian or skew-Hermitian maps of
    the witness ``v`` to ``A_j v``.

    Raises
    ------
    UnsupportedTag
        For palindromic or DH tags.
    InvalidStructure
        If the coefficients violate the tag.
    """
    if not isinstance(P, MatrixPolynomial):
        raise TypeError("expected a MatrixPolynomial")
    tag = P.tag
    if tag in PALINDROMIC or tag is StructureTag.DISSIPATIVE_HAMILTONIAN:
        raise UnsupportedTag(f"{tag.value} polynomials are not handled by poly_delta0")
    ensure_valid(P, rtol)
    G = sum(A.conj().T @ A for A in P.coeffs)
    w, V = np.linalg.eigh(0.5 * (G + G.conj().T))
    v = V[:, 0]
    pert = {}
    for j, A in enumerate(P.coeffs):
        kind = _coefficient_kind(tag, j)
        y = A @ v
        if kind == "herm":
            pert[f"A{j}"] = hermitian_map(v, y, rtol=np.inf)
        elif kind == "skew":
            pert[f"A{j}"] = skew_hermitian_map(v, y, rtol=np.inf)
        else:
            pert[f"A{j}"] = general_map(v, y)
    return DistanceReport(
        value=float(np.sqrt(max(w[0], 0.0))),
        perturbations=pert,
        witness=v,
        inputs=dict(zip(_keys(P.degree), P.coeffs)),
        sign=-1,
        structure=tag.value,
        kind="null-space",
        info={"lambda_min": float(w[0])},
    )


@dataclass
class PalindromicPolyReport:
    """Lower quantity ``2 * lambda_hat`` for a palindromic polynomial.

    ``bound_value`` bounds the squared distance from below; ``sqrt_bound``
    is its square root. When ``equality_certified`` holds, ``report``
    carries the attained distance and an optimal perturbation.
    """

    bound_value: float
    gammas: np.ndarray
    equality_certified: bool
    simplicity_gap: float
    lambda_hat: float = 0.0
    report: Optional[DistanceReport] = None
    trace: Optional[OptimizerTrace] = None
    info: dict = field(default_factory=dict)

    @property
    def sqrt_bound(self):
        return float(np.sqrt(max(self.bound_value, 0.0)))

    @property
    def value(self):
        """The distance when equality is certified, else ``None``."""
        return self.report.value if self.report is not None else None


def palindromic_family(coeffs, star, middle_weighting="half"):
    """Affine family ``f(gamma)`` whose ``lambda_min`` bounds the palindromic distance.

    For each pair index ``j <= k = floor((m - 1) / 2)`` the summand is
    ``(A_j^star)^* A_j^star + gamma_j (A_j^* A_j - (A_j^star)^* A_j^star)``.
    For even ``m`` the self-paired middle coefficient adds
    ``A_{m/2}^* A_{m/2} / 2`` (``middle_weighting="half"``); the alternative
    ``"printed"`` adds ``gamma_j A_{m/2}^* A_{m/2}`` inside every summand.
    """
    m = len(coeffs) - 1
    k = (m - 1) // 2
    n = coeffs[0].shape[0]
    base = np.zeros((n, n), dtype=complex)
    dirs = []
    for j in range(k + 1):
        Aj = coeffs[j]
        Ajs = star_op(Aj, star)
        K0 = Ajs.conj().T @ Ajs
        K1 = Aj.conj().T @ Aj
        base = base + K0
        dirs.append(K1 - K0)
    if m % 2 == 0:
        Am = coeffs[m // 2]
        Gm = Am.conj().T @ Am
        if middle_weighting == "half":
            base = base + 0.5 * Gm
        elif middle_weighting == "printed":
            dirs = [D + Gm for D in dirs]
        else:
            raise ValueError("middle_weighting must be 'half' or 'printed'")
    dirs = [0.5 * (D + D.conj().T) for D in dirs]
    return AffineHermitianFamily(0.5 * (base + base.conj().T), dirs, box=[(0.0, 1.0)] * len(dirs))


def _stationary_combination(W, dirs, gammas):
    """Unit vector in ``span(W)`` making interior directional derivatives vanish (one gamma)."""
    if W.shape[1] == 1 or len(dirs) != 1:
        return W[:, 0]
    g = gammas[0]
    M = W.conj().T @ dirs[0] @ W
    mu, Pm = np.linalg.eigh(0.5 * (M + M.conj().T))
    if 0.0 < g < 1.0 and mu[0] <= 0.0 <= mu[-1] and mu[-1] > mu[0]:
        c2 = mu[-1] / (mu[-1] - mu[0])
        beta = np.sqrt(c2) * Pm[:, 0] + np.sqrt(1.0 - c2) * Pm[:, -1]
    elif g >= 1.0:
        beta = Pm[:, -1]
    elif g <= 0.0:
        beta = Pm[:, 0]
    else:
        beta = Pm[:, int(np.argmin(np.abs(mu)))]
    v = W @ beta
    return v / np.linalg.norm(v)


def poly_delta0_palindromic(P, star=None, restarts=8, seed=0, rtol=1e-10,
                            middle_weighting="half"):
    """Lower quantity (and, when certified, the value) for a palindromic polynomial.

    Parameters
    ----------
    P : MatrixPolynomial
        Coefficients with ``A_j = A_{m-j}^star``.
    star : {'*', 'T'}, optional
        Defaults to the star of ``P.tag``.
    middle_weighting : {'half', 'printed'}
        How the middle coefficient enters for even degree; see
        :func:`palindromic_family`. Equality is only ever certified for
        ``'half'``.

    Returns
    -------
    PalindromicPolyReport

    Raises
    ------
    NotPalindromic
    """
    if not isinstance(P, MatrixPolynomial):
        raise TypeError("expected a MatrixPolynomial")
    if star is None:
        star = P.tag.star
    if star not in ("*", "T"):
        raise ValueError("star must be '*' or 'T'")
    tag = StructureTag.STAR_PALINDROMIC if star == "*" else StructureTag.T_PALINDROMIC
    violations = validate(MatrixPolynomial(P.coeffs, tag), rtol)
    if violations:
        raise NotPalindromic("; ".join(violations), violations)
    coeffs = P.coeffs
    m = len(coeffs) - 1
    fam = palindromic_family(coeffs, star, middle_weighting)
    gammas, lam, trace = maximize_lambda_min_box(fam, restarts=restarts, seed=seed)
    w, V = np.linalg.eigh(fam(gammas))
    lam = float(w[0])
    gap = float(w[1] - w[0]) if w.size > 1 else np.inf
    certified = middle_weighting == "half" and (m <= 2 or gap > SIMPLICITY_GAP)
    out = PalindromicPolyReport(
        bound_value=2.0 * lam,
        gammas=np.asarray(gammas, dtype=float),
        equality_certified=bool(certified),
        simplicity_gap=gap,
        lambda_hat=lam,
        trace=trace,
        info={"middle_weighting": middle_weighting, "degree": m},
    )
    if certified:
        dnorm = max((spectral_norm(D) for D in fam.directions), default=0.0)
        ctol = 1e-9 * dnorm + 1e-13 * (1.0 + spectral_norm(fam.base))
        cluster = int(np.sum(w - w[0] <= ctol))
        v = _stationary_combination(V[:, :cluster], fam.directions, out.gammas)
        out.report = _palindromic_perturbation(coeffs, star, v, lam, tag)
    return out


def _palindromic_perturbation(coeffs, star, v, lam, tag):
    m = len(coeffs) - 1
    pert = {}
    for j in range((m + 1) // 2):
        Aj = coeffs[j]
        D = two_sided_map(v, Aj @ v, star_op(Aj, star) @ v, star, rtol=np.inf)
        pert[f"A{j}"] = D
        pert[f"A{m - j}"] = star_op(D, star)
    if m % 2 == 0:
        Am = coeffs[m // 2]
        pert[f"A{m // 2}"] = self_star_map(v, Am @ v, star) if star == "T" else \
            hermitian_map(v, Am @ v, rtol=np.inf)
    pert = {k: pert[k] for k in _keys(m)}
    return DistanceReport(
        value=float(np.sqrt(max(2.0 * lam, 0.0))),
        perturbations=pert,
        witness=v,
        inputs=dict(zip(_keys(m), coeffs)),
        sign=-1,
        structure=tag.value,
        kind="null-space",
        info={"lambda_hat": lam},
    )


__all__ = [
    "poly_delta0",
    "poly_delta0_palindromic",
    "palindromic_family",
    "PalindromicPolyReport",
]
