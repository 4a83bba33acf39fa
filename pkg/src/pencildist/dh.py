"""Distances of a DH pencil ``sE + (J - R)`` to a common null space of ``J, R, E``.

Perturbations keep the structure: ``J + Delta_J`` stays skew-Hermitian and
``R + Delta_R``, ``E + Delta_E`` stay positive semidefinite. Only the
matrices named by the distance kind are perturbed; a witness ``x`` must
then already lie in the kernel of the others.

For a unit ``x`` the cheapest structured perturbations have norms

* ``||J x||`` for ``J`` (a minimal skew-Hermitian map),
* ``x^* R^2 x / x^* R x`` for ``R`` (the rank-one cut
  ``-(Rx)(Rx)^* / x^* R x``), and likewise for ``E``,

so each distance is the minimum over admissible ``x`` of the root sum of
squares of these costs. When ``x`` approaches ``ker R`` the ``R`` cost
tends to a finite limit, and the limit problems (``R`` dropped from the
allowed set, ``x`` restricted to ``ker R``) are evaluated as separate
candidates.
"""

from enum import Enum
from functools import lru_cache

import numpy as np

from ._validation import spectral_norm
from .exceptions import MissingPerturbations, NoFeasibleStart
from .linalg import cholesky, kernel_intersection, null_space_basis, svd
from .mappings import dissipation_cut, general_map, skew_hermitian_map
from .model import DHTriple, DistanceReport, ensure_valid
from .optimize import OptimizerTrace, minimize_sphere_multistart

#: x^* X x below this fraction of ||X|| counts as "in ker X" for the guards
GUARD_RTOL = 1e-12
#: the optimum is flagged when x^* X x is below this fraction of ||X||
BOUNDARY_RTOL = 1e-8


class DHDistanceKind(str, Enum):
    J = "J"
    R = "R"
    E = "E"
    JR = "JR"
    JE = "JE"
    RE = "RE"
    JRE = "JRE"
    UNSTRUCTURED = "unstructured"

    @classmethod
    def parse(cls, value):
        if isinstance(value, cls):
            return value
        key = str(value).strip()
        for member in cls:
            if member.value.lower() == key.lower() or member.name.lower() == key.lower():
                return member
        raise ValueError(f"unknown DH distance kind {value!r}")

    @property
    def allowed(self):
        """Matrices that may be perturbed (``None`` for the unstructured kind)."""
        if self is DHDistanceKind.UNSTRUCTURED:
            return None
        return frozenset(self.value)


def _unstructured(triple):
    J, R, E = triple.J, triple.R, triple.E
    G = J.conj().T @ J + R @ R + E @ E
    w, V = np.linalg.eigh(0.5 * (G + G.conj().T))
    x = V[:, 0]
    value = float(np.sqrt(max(w[0], 0.0)))
    pert = {k: -general_map(x, M @ x) for k, M in (("J", J), ("R", R), ("E", E))}
    return value, x, pert


class _Solver:
    """Evaluates the candidate recursion for one triple."""

    def __init__(self, triple, starts, seed, rank_tol):
        self.t = triple
        self.mats = {"J": triple.J, "R": triple.R, "E": triple.E}
        self.sq = {
            "J": triple.J.conj().T @ triple.J,
            "R": triple.R @ triple.R,
            "E": triple.E @ triple.E,
        }
        self.norms = {k: spectral_norm(M) for k, M in self.mats.items()}
        self.starts = starts
        self.seed = seed
        self.rank_tol = rank_tol
        self.flags = set()
        self.evaluations = 0
        self.crosscheck = {}
        self.solve = lru_cache(maxsize=None)(self._solve)

    # -- per-vector cost ---------------------------------------------------
    def cost2(self, x, allowed):
        """Squared perturbation cost of the unit vector ``x``."""
        x = x / np.linalg.norm(x)
        total = 0.0
        for k in allowed:
            if k == "J":
                total += np.linalg.norm(self.t.J @ x) ** 2
            else:
                X = self.mats[k]
                Xx = X @ x
                q = np.vdot(x, Xx).real
                # x in ker X (to rounding) costs nothing for this matrix
                if np.linalg.norm(Xx) <= 1e-12 * (1.0 + self.norms[k]):
                    continue
                total += (np.vdot(Xx, Xx).real / q) ** 2 if q > 0 else np.inf
        return total

    def _objective(self, allowed):
        sq, mats = self.sq, self.mats

        def f(x):
            nx2 = np.vdot(x, x).real
            total = 0.0
            if "J" in allowed:
                total += np.vdot(x, sq["J"] @ x).real / nx2
            for k in ("R", "E"):
                if k in allowed:
                    total += (np.vdot(x, sq[k] @ x).real / np.vdot(x, mats[k] @ x).real) ** 2
            return total

        def grad(x):
            nx2 = np.vdot(x, x).real
            g = np.zeros_like(x)
            if "J" in allowed:
                Px = sq["J"] @ x
                g += (Px - (np.vdot(x, Px).real / nx2) * x) / nx2
            for k in ("R", "E"):
                if k in allowed:
                    Xx, X2x = mats[k] @ x, sq[k] @ x
                    den = np.vdot(x, Xx).real
                    r = np.vdot(x, X2x).real / den
                    g += 2.0 * r * (X2x - r * Xx) / den
            return g

        return f, grad

    def _guard(self, allowed):
        keys = [k for k in ("R", "E") if k in allowed]

        def ok(x):
            nx2 = np.vdot(x, x).real
            for k in keys:
                if np.vdot(x, self.mats[k] @ x).real <= GUARD_RTOL * max(self.norms[k], 1e-300) * nx2:
                    return False
            return True
        return ok

    # -- recursion -------------------------------------------------------------
    def basis(self, allowed):
        """Orthonormal basis of the kernel shared by the matrices *not* allowed."""
        fixed = [self.mats[k] for k in ("J", "R", "E") if k not in allowed]
        n = self.t.n
        if not fixed:
            return np.eye(n, dtype=complex)
        return kernel_intersection(*fixed, rank_tol=self.rank_tol)

    def _solve(self, allowed):
        """Best ``(cost2, x, branch)`` for the allowed set (``x`` unit or ``None``)."""
        U = self.basis(allowed)
        if U.shape[1] == 0:
            return np.inf, None, "empty"
        best = (np.inf, None, "empty")
        if not allowed:
            return 0.0, U[:, 0], "common-kernel"
        interior = self._interior(allowed, U)
        if interior[0] < best[0]:
            best = interior
        for k in ("R", "E"):
            if k in allowed:
                sub = self.solve(allowed - {k})
                # a candidate from a smaller set is admissible here as well
                if sub[0] < best[0]:
                    best = sub
        return best

    def _interior(self, allowed, U):
        if allowed == frozenset("J"):
            _, s, V = svd(self.t.J @ U)
            k = U.shape[1]
            smin = s[-1] if s.size >= k else 0.0
            x = U @ V[:, k - 1]
            return float(smin) ** 2, x / np.linalg.norm(x), "J"
        if len(allowed) == 1:
            (k,) = tuple(allowed)
            return self._rayleigh(k, U)
        return self._sphere(allowed, U)

    def _rayleigh(self, k, U):
        """min of x^* X^2 x / x^* X x over span(U) minus ker X (generalized eigenproblem)."""
        X, X2 = self.mats[k], self.sq[k]
        # the ratio ignores components in ker X, so restrict to the complement
        XU = X @ U
        W = null_space_basis(XU, self.rank_tol)
        if W.shape[1] == U.shape[1]:
            return np.inf, None, k
        _, _, V = svd(XU)
        rank = U.shape[1] - W.shape[1]
        Ur = U @ V[:, :rank]
        B = Ur.conj().T @ X @ Ur
        C = Ur.conj().T @ X2 @ Ur
        L = cholesky(0.5 * (B + B.conj().T))
        Linv = np.linalg.inv(L)
        M = Linv @ C @ Linv.conj().T
        w, Y = np.linalg.eigh(0.5 * (M + M.conj().T))
        val = float(w[0])
        x = Ur @ (Linv.conj().T @ Y[:, 0])
        x = x / np.linalg.norm(x)
        # second route: direct minimization of the ratio on the sphere
        f, grad = self._objective(frozenset(k))
        try:
            _, v2, tr = minimize_sphere_multistart(
                lambda y: np.sqrt(f(y)), basis=Ur, starts=4, seed=self.seed,
                guard=self._guard(frozenset(k)),
                gradient=lambda y: grad(y) / (2.0 * np.sqrt(max(f(y), 1e-300))),
                init=[x])
            self.evaluations += tr.evaluations
            self.crosscheck[k] = float(v2)
            if abs(v2 - val) > 1e-6 * (1.0 + val):
                self.flags.add("crosscheck-mismatch")
        except NoFeasibleStart:
            pass
        return val ** 2, x, k

    def _sphere(self, allowed, U):
        f, grad = self._objective(allowed)
        guard = self._guard(allowed)
        init = []
        for k in ("J", "R", "E"):
            for P in (self.sq[k], self.mats[k]) if k != "J" else (self.sq[k],):
                Pu = U.conj().T @ P @ U
                _, Y = np.linalg.eigh(0.5 * (Pu + Pu.conj().T))
                init.extend([U @ Y[:, 0], U @ Y[:, -1]])
        G = sum(self.sq[k] for k in allowed)
        _, Y = np.linalg.eigh(U.conj().T @ G @ U)
        init = [U @ Y[:, i] for i in range(Y.shape[1])] + init
        init = [v for v in init if guard(v)]
        try:
            x, val, tr = minimize_sphere_multistart(
                f, basis=U, starts=max(self.starts, len(init)), seed=self.seed, guard=guard,
                gradient=grad, init=init)
        except NoFeasibleStart:
            return np.inf, None, "".join(sorted(allowed))
        self.evaluations += tr.evaluations
        for k in ("R", "E"):
            if k in allowed and np.vdot(x, self.mats[k] @ x).real <= BOUNDARY_RTOL * self.norms[k]:
                self.flags.add("boundary-approach")
        return float(val), x, "".join(k for k in "JRE" if k in allowed)


def _structured_perturbations(triple, x, allowed):
    n = triple.n
    zero = np.zeros((n, n), dtype=complex)
    out = {"J": zero.copy(), "R": zero.copy(), "E": zero.copy()}
    if "J" in allowed:
        Jx = triple.J @ x
        # J + Delta_J must stay skew-Hermitian and kill x
        out["J"] = skew_hermitian_map(x, -Jx, rtol=np.inf)
    for k in ("R", "E"):
        if k in allowed:
            out[k] = dissipation_cut(getattr(triple, k), x)
    return out


def dh_delta0(triple, kind="JRE", starts=32, seed=0, rank_tol=1e-10, rtol=1e-10):
    """Structured distance of a DH triple to a common null space.

    Parameters
    ----------
    triple : DHTriple
    kind : DHDistanceKind or str
        Which of ``J``, ``R``, ``E`` may be perturbed (``"JRE"``, ``"JR"``,
        ...), or ``"unstructured"`` for arbitrary perturbations of all three.
    starts : int
        Starting points for the sphere searches.
    seed : int

    Returns
    -------
    DistanceReport
        ``value`` is ``inf`` when no admissible witness exists. Perturbed
        matrices are ``J + Delta_J``, ``R + Delta_R``, ``E + Delta_E``.

    Examples
    --------
    >>> import numpy as np
    >>> J = np.array([[0, -0.5], [0.5, 0]])
    >>> R = np.array([[0.18, 0.42], [0.42, 1.03]])
    >>> r = dh_delta0(DHTriple(J, R, np.diag([0., 1.])), "unstructured")
    >>> round(r.value, 4)
    0.5819
    """
    if not isinstance(triple, DHTriple):
        raise TypeError("expected a DHTriple")
    ensure_valid(triple, rtol)
    kind = DHDistanceKind.parse(kind)
    inputs = {"J": triple.J, "R": triple.R, "E": triple.E}
    if kind is DHDistanceKind.UNSTRUCTURED:
        value, x, pert = _unstructured(triple)
        return DistanceReport(value, pert, x, inputs, sign=+1, structure="dissipative-hamiltonian",
                              kind=kind.value, trace=OptimizerTrace(1, np.array([value]), value),
                              info={"branch": "unstructured"})

    solver = _Solver(triple, starts, seed, rank_tol)
    allowed = kind.allowed
    c2, x, branch = solver.solve(allowed)
    trace = OptimizerTrace(max(solver.evaluations, 1), np.zeros(0), float(np.sqrt(c2)),
                           set(solver.flags))
    info = {"branch": branch}
    if solver.crosscheck:
        info["rayleigh_crosscheck"] = dict(solver.crosscheck)
    if x is None or not np.isfinite(c2):
        return DistanceReport(np.inf, {}, None, inputs, sign=+1,
                              structure="dissipative-hamiltonian", kind=kind.value,
                              trace=trace, info=info)
    x = x / np.linalg.norm(x)
    pert = _structured_perturbations(triple, x, allowed)
    value = float(np.sqrt(max(c2, 0.0)))
    trace.best_point = np.concatenate([x.real, x.imag])
    return DistanceReport(value, pert, x, inputs, sign=+1, structure="dissipative-hamiltonian",
                          kind=kind.value, trace=trace, info=info)


def dh_cost(triple, x, kind="JRE"):
    """Structured cost of making the unit direction ``x`` a common null vector.

    ``inf`` when ``x`` is not in the kernel of the matrices the kind keeps
    fixed (to ``1e-8`` relative).
    """
    kind = DHDistanceKind.parse(kind)
    x = np.asarray(x, dtype=complex)
    x = x / np.linalg.norm(x)
    if kind is DHDistanceKind.UNSTRUCTURED:
        return float(np.sqrt(sum(np.linalg.norm(M @ x) ** 2 for M in (triple.J, triple.R, triple.E))))
    allowed = kind.allowed
    for k in ("J", "R", "E"):
        M = getattr(triple, k)
        if k not in allowed and np.linalg.norm(M @ x) > 1e-8 * (1.0 + spectral_norm(M)):
            return np.inf
    s = _Solver(triple, 1, 0, 1e-10)
    return float(np.sqrt(s.cost2(x, allowed)))


def dh_frobenius_norm_of_optimum(report):
    """``||[Delta_J, Delta_R, Delta_E]||_F`` of a DH report.

    Raises
    ------
    MissingPerturbations
        If the report carries no DH perturbations.
    """
    pert = getattr(report, "perturbations", None) or {}
    if not pert or not all(k in pert for k in ("J", "R", "E")):
        raise MissingPerturbations("report has no Delta_J, Delta_R, Delta_E")
    return float(np.sqrt(sum(np.linalg.norm(pert[k], "fro") ** 2 for k in ("J", "R", "E"))))


__all__ = [
    "DHDistanceKind",
    "dh_delta0",
    "dh_cost",
    "dh_frobenius_norm_of_optimum",
]
