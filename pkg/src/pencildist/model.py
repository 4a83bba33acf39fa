"""Structured pencils, DH triples, matrix polynomials and distance reports."""

from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from ._validation import (
    STRUCTURE_RTOL,
    check_pair,
    check_same_size,
    hermitian_defect,
    min_eigenvalue_margin,
    skew_defect,
    spectral_norm,
)
from .exceptions import InvalidStructure
from .linalg import sigma_min


class StructureTag(str, Enum):
    UNSTRUCTURED = "unstructured"
    HERMITIAN = "hermitian"
    SKEW_HERMITIAN = "skew-hermitian"
    STAR_EVEN = "star-even"
    STAR_ODD = "star-odd"
    STAR_PALINDROMIC = "star-palindromic"
    T_PALINDROMIC = "t-palindromic"
    DISSIPATIVE_HAMILTONIAN = "dissipative-hamiltonian"

    @classmethod
    def parse(cls, value):
        """Accept enum members, canonical names and loose spellings
        (``"skew_hermitian"``, ``"SkewHermitian"``, ``"dh"``, ``"*-even"``)."""
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower().replace("_", "-").replace(" ", "-")
        key = key.replace("*", "star")
        aliases = {
            "skewhermitian": cls.SKEW_HERMITIAN,
            "skew": cls.SKEW_HERMITIAN,
            "stareven": cls.STAR_EVEN,
            "even": cls.STAR_EVEN,
            "star-odd": cls.STAR_ODD,
            "starodd": cls.STAR_ODD,
            "odd": cls.STAR_ODD,
            "starpalindromic": cls.STAR_PALINDROMIC,
            "palindromic": cls.STAR_PALINDROMIC,
            "tpalindromic": cls.T_PALINDROMIC,
            "dissipativehamiltonian": cls.DISSIPATIVE_HAMILTONIAN,
            "dh": cls.DISSIPATIVE_HAMILTONIAN,
            "none": cls.UNSTRUCTURED,
        }
        for member in cls:
            if member.value == key:
                return member
        compact = key.replace("-", "")
        if key in aliases:
            return aliases[key]
        if compact in aliases:
            return aliases[compact]
        raise ValueError(f"unknown structure tag {value!r}")

    @property
    def star(self):
        """``'*'`` or ``'T'`` for palindromic tags, else ``None``."""
        if self is StructureTag.STAR_PALINDROMIC:
            return "*"
        if self is StructureTag.T_PALINDROMIC:
            return "T"
        return None


HERMITIAN_FAMILY = (
    StructureTag.HERMITIAN,
    StructureTag.SKEW_HERMITIAN,
    StructureTag.STAR_EVEN,
    StructureTag.STAR_ODD,
)
PALINDROMIC = (StructureTag.STAR_PALINDROMIC, StructureTag.T_PALINDROMIC)


def star_op(M, star):
    """Apply ``M -> M^*`` (``star='*'``) or ``M -> M^T`` (``star='T'``)."""
    if star == "*":
        return M.conj().T
    if star == "T":
        return M.T
    raise ValueError(f"star must be '*' or 'T', got {star!r}")


@dataclass
class StructuredPencil:
    """The pencil ``L(s) = A + s E`` with a structure tag."""

    A: np.ndarray
    E: np.ndarray
    tag: StructureTag = StructureTag.UNSTRUCTURED

    def __post_init__(self):
        self.A, self.E = check_pair(self.A, self.E)
        self.tag = StructureTag.parse(self.tag)

    @property
    def n(self):
        return self.A.shape[0]

    def evaluate(self, lam):
        return self.A + lam * self.E


@dataclass
class DHTriple:
    """Dissipative Hamiltonian data for the pencil ``s E + (J - R)``."""

    J: np.ndarray
    R: np.ndarray
    E: np.ndarray

    def __post_init__(self):
        self.J, self.R, self.E = check_same_size(self.J, self.R, self.E,
                                                 names=("J", "R", "E"))

    @property
    def n(self):
        return self.J.shape[0]

    tag = StructureTag.DISSIPATIVE_HAMILTONIAN

    def as_pencil(self):
        """The pencil ``(J - R) + s E`` as an unstructured pencil."""
        return StructuredPencil(self.J - self.R, self.E, StructureTag.UNSTRUCTURED)


@dataclass
class MatrixPolynomial:
    """``P(s) = sum_j s^j A_j`` with coefficients ``(A_0, ..., A_m)``."""

    coeffs: List[np.ndarray]
    tag: StructureTag = StructureTag.UNSTRUCTURED

    def __post_init__(self):
        if len(self.coeffs) < 1:
            raise ValueError("a matrix polynomial needs at least one coefficient")
        self.coeffs = check_same_size(*self.coeffs,
                                      names=[f"A{j}" for j in range(len(self.coeffs))])
        self.tag = StructureTag.parse(self.tag)

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def n(self):
        return self.coeffs[0].shape[0]

    def evaluate(self, s):
        out = np.zeros_like(self.coeffs[0])
        for Aj in reversed(self.coeffs):
            out = out * s + Aj
        return out


@dataclass
class DistanceReport:
    """Outcome of a distance-to-common-null-space computation.

    ``perturbations`` and ``inputs`` share keys (``"A"``/``"E"``,
    ``"J"``/``"R"``/``"E"`` or ``"A0"``...). The perturbed matrices are
    ``inputs[k] + sign * perturbations[k]``; pencils use ``sign=-1``
    (``A - Delta_A``), DH triples use ``sign=+1`` (``J + Delta_J``).
    """

    value: float
    perturbations: Dict[str, np.ndarray] = field(default_factory=dict)
    witness: Optional[np.ndarray] = None
    inputs: Dict[str, np.ndarray] = field(default_factory=dict)
    sign: int = -1
    structure: str = "unstructured"
    kind: str = "null-space"
    trace: Any = None
    info: Dict[str, Any] = field(default_factory=dict)

    @property
    def finite(self):
        return bool(np.isfinite(self.value))

    def perturbed(self):
        return {k: self.inputs[k] + self.sign * self.perturbations[k]
                for k in self.perturbations}

    def combined_norm(self):
        """``sqrt(sum ||Delta_k||^2)`` in the spectral norm."""
        return float(np.sqrt(sum(spectral_norm(D) ** 2
                                 for D in self.perturbations.values())))

    def frobenius_norm(self):
        return float(np.sqrt(sum(np.linalg.norm(D, "fro") ** 2
                                 for D in self.perturbations.values())))


def _pencil_violations(A, E, tag, rtol):
    out = []

    def herm(M, name):
        if hermitian_defect(M) > rtol:
            out.append(f"{name} is not Hermitian ({name} != {name}^*)")

    def skew(M, name):
        if skew_defect(M) > rtol:
            out.append(f"{name} is not skew-Hermitian ({name} != -{name}^*)")

    if tag is StructureTag.HERMITIAN:
        herm(A, "A"), herm(E, "E")
    elif tag is StructureTag.SKEW_HERMITIAN:
        skew(A, "A"), skew(E, "E")
    elif tag is StructureTag.STAR_EVEN:
        herm(A, "A"), skew(E, "E")
    elif tag is StructureTag.STAR_ODD:
        skew(A, "A"), herm(E, "E")
    elif tag in PALINDROMIC:
        target = star_op(A, tag.star)
        if spectral_norm(E - target) > rtol * (1.0 + spectral_norm(A)):
            out.append(f"E != A^{tag.star} (not {tag.value})")
    elif tag is StructureTag.DISSIPATIVE_HAMILTONIAN:
        out.append("a DH pencil must be given as a DHTriple (J, R, E)")
    return out


def _dh_violations(triple, rtol):
    out = []
    if skew_defect(triple.J) > rtol:
        out.append("J is not skew-Hermitian (J != -J^*)")
    for name in ("R", "E"):
        M = getattr(triple, name)
        if hermitian_defect(M) > rtol:
            out.append(f"{name} is not Hermitian")
        margin = min_eigenvalue_margin(M)
        if margin < -rtol:
            out.append(f"{name} is not positive semidefinite "
                       f"(lambda_min/(1+||{name}||) = {margin:.3g})")
    return out


def _poly_violations(P, rtol):
    out = []
    tag = P.tag
    m = P.degree
    for j, Aj in enumerate(P.coeffs):
        if tag is StructureTag.HERMITIAN:
            want = +1
        elif tag is StructureTag.SKEW_HERMITIAN:
            want = -1
        elif tag is StructureTag.STAR_EVEN:
            want = (-1) ** j
        elif tag is StructureTag.STAR_ODD:
            want = (-1) ** (j + 1)
        else:
            want = None
        if want == 1 and hermitian_defect(Aj) > rtol:
            out.append(f"A{j} is not Hermitian")
        elif want == -1 and skew_defect(Aj) > rtol:
            out.append(f"A{j} is not skew-Hermitian")
    if tag in PALINDROMIC:
        for j in range(m + 1):
            target = star_op(P.coeffs[m - j], tag.star)
            if spectral_norm(P.coeffs[j] - target) > rtol * (1.0 + spectral_norm(target)):
                out.append(f"A{j} != A{m - j}^{tag.star}")
    if tag is StructureTag.DISSIPATIVE_HAMILTONIAN:
        out.append("DH-structured polynomials are not supported")
    return out


def validate(obj, rtol=STRUCTURE_RTOL):
    """List the structure invariants ``obj`` violates (empty list: valid).

    ``obj`` may be a :class:`StructuredPencil`, :class:`DHTriple` or
    :class:`MatrixPolynomial`.
    """
    if isinstance(obj, DHTriple):
        return _dh_violations(obj, rtol)
    if isinstance(obj, StructuredPencil):
        return _pencil_violations(obj.A, obj.E, obj.tag, rtol)
    if isinstance(obj, MatrixPolynomial):
        return _poly_violations(obj, rtol)
    raise TypeError(f"cannot validate object of type {type(obj).__name__}")


def ensure_valid(obj, rtol=STRUCTURE_RTOL):
    violations = validate(obj, rtol)
    if violations:
        raise InvalidStructure("; ".join(violations), violations)
    return obj


# -- random generators -------------------------------------------------------

def _cgauss(rng, *shape):
    return (rng.standard_normal(shape) + 1j * rng.standard_normal(shape)) / np.sqrt(2)


def _herm(rng, n):
    B = _cgauss(rng, n, n)
    return 0.5 * (B + B.conj().T)


def _skew(rng, n):
    B = _cgauss(rng, n, n)
    return 0.5 * (B - B.conj().T)


def _psd(rng, n, rank=None):
    k = n if rank is None else rank
    B = _cgauss(rng, k, n)
    return B.conj().T @ B


def random_dh_triple(n, seed=0, rank_J=None, rank_R=None, rank_E=None):
    """Random DH triple; PSD factors are ``B^* B`` with ``B`` of ``rank`` rows.

    ``rank_J`` restricts ``J`` to a random subspace of that dimension.
    """
    rng = np.random.default_rng(seed)
    J = _skew(rng, n)
    if rank_J is not None and rank_J < n:
        Q, _ = np.linalg.qr(_cgauss(rng, n, n))
        P = Q[:, :rank_J] @ Q[:, :rank_J].conj().T
        J = P @ J @ P
        J = 0.5 * (J - J.conj().T)
    R = _psd(rng, n, rank_R)
    E = _psd(rng, n, rank_E)
    return DHTriple(J, 0.5 * (R + R.conj().T), 0.5 * (E + E.conj().T))


def random_structured(tag, n, seed=0, **ranks):
    """Random pencil (or DH triple) satisfying ``tag``; deterministic per seed."""
    if n < 1:
        raise ValueError("n must be at least 1")
    tag = StructureTag.parse(tag)
    if tag is StructureTag.DISSIPATIVE_HAMILTONIAN:
        return random_dh_triple(n, seed, **ranks)
    rng = np.random.default_rng(seed)
    if tag is StructureTag.UNSTRUCTURED:
        A, E = _cgauss(rng, n, n), _cgauss(rng, n, n)
    elif tag is StructureTag.HERMITIAN:
        A, E = _herm(rng, n), _herm(rng, n)
    elif tag is StructureTag.SKEW_HERMITIAN:
        A, E = _skew(rng, n), _skew(rng, n)
    elif tag is StructureTag.STAR_EVEN:
        A, E = _herm(rng, n), _skew(rng, n)
    elif tag is StructureTag.STAR_ODD:
        A, E = _skew(rng, n), _herm(rng, n)
    else:
        A = _cgauss(rng, n, n)
        E = star_op(A, tag.star)
    return StructuredPencil(A, E, tag)


def random_polynomial(tag, n, degree, seed=0):
    """Random matrix polynomial of the given degree satisfying ``tag``."""
    tag = StructureTag.parse(tag)
    rng = np.random.default_rng(seed)
    m = degree
    coeffs = []
    if tag in PALINDROMIC:
        coeffs = [None] * (m + 1)
        for j in range(m + 1):
            if coeffs[j] is not None:
                continue
            if j == m - j:
                B = _cgauss(rng, n, n)
                coeffs[j] = 0.5 * (B + star_op(B, tag.star))
            else:
                coeffs[j] = _cgauss(rng, n, n)
                coeffs[m - j] = star_op(coeffs[j], tag.star)
        return MatrixPolynomial(coeffs, tag)
    for j in range(m + 1):
        if tag is StructureTag.UNSTRUCTURED:
            coeffs.append(_cgauss(rng, n, n))
        elif tag is StructureTag.HERMITIAN:
            coeffs.append(_herm(rng, n))
        elif tag is StructureTag.SKEW_HERMITIAN:
            coeffs.append(_skew(rng, n))
        elif tag is StructureTag.STAR_EVEN:
            coeffs.append(_herm(rng, n) if j % 2 == 0 else _skew(rng, n))
        elif tag is StructureTag.STAR_ODD:
            coeffs.append(_skew(rng, n) if j % 2 == 0 else _herm(rng, n))
        else:
            raise ValueError(f"no polynomial generator for {tag.value}")
    return MatrixPolynomial(coeffs, tag)


# -- regularity ----------------------------------------------------------------

@dataclass
class RegularityVerdict:
    """Result of :func:`is_regular`.

    A ``False`` verdict is probabilistic: every probe hit a numerically
    singular ``A + lambda E``.
    """

    regular: bool
    certificate: Optional[complex]
    margin: float
    probes: int
    probabilistic: bool = True

    def __bool__(self):
        return self.regular


def is_regular(pencil, probes=16, seed=0, rtol=1e-10):
    """Probe regularity of ``A + s E`` at random points of a scaled disk.

    Returns a :class:`RegularityVerdict` that is truthy for regular pencils
    and carries the certificate ``lambda`` with ``A + lambda E`` invertible.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    if isinstance(pencil, DHTriple):
        pencil = pencil.as_pencil()
    A, E = pencil.A, pencil.E
    nA, nE = spectral_norm(A), spectral_norm(E)
    radius = 1.0 + nA / (1.0 + sigma_min(E))
    rng = np.random.default_rng(seed)
    best = 0.0
    for _ in range(probes):
        lam = radius * np.sqrt(rng.uniform()) * np.exp(2j * np.pi * rng.uniform())
        smin = sigma_min(A + lam * E)
        thresh = rtol * (1.0 + nA + abs(lam) * nE)
        best = max(best, smin)
        if smin > thresh:
            return RegularityVerdict(True, complex(lam), smin, probes)
    return RegularityVerdict(False, None, best, probes)
