"""Eigenvalue optimization over affine Hermitian families and the unit sphere.

Four engines live here:

* :func:`maximize_lambda_min_box` -- maximize the (concave) smallest
  eigenvalue of ``H(t) = H0 + sum t_i H_i`` over a box;
* :func:`minimize_lambda_max_affine` -- minimize the (convex) largest
  eigenvalue over all of ``R^k``;
* :func:`minimize_lambda2_coupled` -- minimize the second largest eigenvalue
  of ``[[G, t conj(S)], [t S, G]]`` over ``t >= 0`` (not convex);
* :func:`minimize_sphere_multistart` -- minimize a smooth function of a unit
  vector restricted to a subspace.

Nonsmooth eigenvalue functions are handled by log-sum-exp smoothing with a
decreasing temperature, followed by a derivative-free polish on the exact
function. One-dimensional problems use golden-section search directly.
"""

from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp

from ._validation import check_same_size, hermitian_defect, spectral_norm
from .exceptions import NoFeasibleStart, NotHermitian, Unbounded

GOLDEN_TOL = 1e-10
GOLDEN_MAXITER = 200
_INVPHI = (np.sqrt(5.0) - 1.0) / 2.0


@dataclass
class OptimizerTrace:
    """Diagnostics attached to every optimizer result."""

    evaluations: int = 0
    best_point: np.ndarray = field(default_factory=lambda: np.zeros(0))
    best_value: float = np.nan
    flags: set = field(default_factory=set)

    def as_dict(self):
        return {
            "evaluations": int(self.evaluations),
            "best_point": [float(t) for t in np.ravel(self.best_point)],
            "best_value": float(self.best_value),
            "flags": sorted(self.flags),
        }


class AffineHermitianFamily:
    """``H(t) = base + sum_i t_i * directions[i]`` with Hermitian data.

    Parameters
    ----------
    base : (n, n) array_like
    directions : sequence of (n, n) array_like
    box : sequence of (lo, hi) pairs, optional
        Default domain for box-constrained maximization.
    """

    def __init__(self, base, directions=(), box=None, rtol=1e-10):
        mats = check_same_size(base, *directions,
                               names=["base"] + [f"direction {i}" for i in range(len(directions))])
        for i, M in enumerate(mats):
            if hermitian_defect(M) > rtol:
                raise NotHermitian(f"family matrix {i} is not Hermitian")
        mats = [0.5 * (M + M.conj().T) for M in mats]
        self.base = mats[0]
        self.directions = mats[1:]
        if box is not None:
            box = [(float(lo), float(hi)) for lo, hi in box]
            if len(box) != self.dim:
                raise ValueError("box needs one (lo, hi) pair per direction")
        self.box = box
        self._stack = np.array(self.directions) if self.directions else None

    @property
    def dim(self):
        return len(self.directions)

    @property
    def n(self):
        return self.base.shape[0]

    def __call__(self, t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        if t.size != self.dim:
            raise ValueError(f"expected {self.dim} parameters, got {t.size}")
        if self.dim == 0:
            return self.base.copy()
        out = self.base.copy()
        for ti, H in zip(t, self.directions):
            out += ti * H
        return out

    def eigh(self, t):
        return np.linalg.eigh(self(t))

    def gradients(self, v):
        """``(v^* H_i v)_i`` for a unit vector ``v`` (derivative of a simple eigenvalue)."""
        return np.array([np.vdot(v, H @ v).real for H in self.directions])


# -- golden section ------------------------------------------------------------

def golden_section_min(f, a, b, tol=GOLDEN_TOL, maxiter=GOLDEN_MAXITER):
    """Minimize a unimodal ``f`` on ``[a, b]``.

    The endpoints are evaluated too, so monotone functions return the
    correct endpoint.

    Returns
    -------
    x, fx, evaluations
    """
    a, b = float(a), float(b)
    if b < a:
        raise ValueError("need a <= b")
    fa, fb = f(a), f(b)
    nev = 2
    if b - a <= tol:
        return (a, fa, nev) if fa <= fb else (b, fb, nev)
    c = b - _INVPHI * (b - a)
    d = a + _INVPHI * (b - a)
    fc, fd = f(c), f(d)
    nev += 2
    it = 0
    while b - a > tol and it < maxiter:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - _INVPHI * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + _INVPHI * (b - a)
            fd = f(d)
        nev += 1
        it += 1
    best = min([(fc, c), (fd, d), (fa, a), (fb, b)], key=lambda p: (p[0], p[1]))
    return best[1], best[0], nev


def golden_section_max(f, a, b, tol=GOLDEN_TOL, maxiter=GOLDEN_MAXITER):
    """Maximize a unimodal ``f`` on ``[a, b]``; returns ``(x, f(x), evaluations)``."""
    x, fx, nev = golden_section_min(lambda s: -f(s), a, b, tol, maxiter)
    return x, -fx, nev


# -- smoothed eigenvalue functions ----------------------------------------------

def _smooth_max(w, mu):
    """Log-sum-exp of ``w / mu`` times ``mu`` and its softmax weights."""
    val = mu * logsumexp(w / mu)
    weights = np.exp((w - val) / mu)
    return val, weights


class _Counter:
    def __init__(self):
        self.n = 0


def _smoothed_objective(family, sign, mu, counter):
    """``sign * lambda_max(sign * H(t))`` smoothed; returns value and gradient."""
    def fun(t):
        counter.n += 1
        w, V = family.eigh(t)
        w = sign * w
        val, p = _smooth_max(w, mu)
        Vp = V * np.sqrt(p)
        grad = np.array([sign * np.real(np.einsum("ij,ik,kj->", Vp.conj(), H, Vp))
                         for H in family.directions])
        return val, grad
    return fun


def _multiplicity(w, which, tol):
    if which == "min":
        return int(np.sum(w - w[0] <= tol))
    return int(np.sum(w[-1] - w <= tol))


def maximize_lambda_min_box(family, box=None, restarts=8, seed=0, tol=1e-10):
    """Maximize ``lambda_min(H(t))`` over a box.

    ``lambda_min`` of an affine family is concave, so the smoothed problem
    has a unique optimum up to the smoothing error; the final value is the
    exact ``lambda_min`` at the returned point.

    Returns
    -------
    point : ndarray
    value : float
    trace : OptimizerTrace
    """
    box = box if box is not None else family.box
    k = family.dim
    if k and box is None:
        raise ValueError("a bounded box is required")
    box = [(float(lo), float(hi)) for lo, hi in (box or [])]
    for lo, hi in box:
        if not (np.isfinite(lo) and np.isfinite(hi) and lo <= hi):
            raise ValueError("box must be bounded with lo <= hi")
    trace = OptimizerTrace()
    lmin = lambda t: float(np.linalg.eigvalsh(family(t))[0])  # noqa: E731

    if k == 0:
        val = lmin([])
        trace.evaluations = 1
        trace.best_point, trace.best_value = np.zeros(0), val
        return np.zeros(0), val, trace

    if k == 1:
        lo, hi = box[0]
        x, val, nev = golden_section_max(lambda s: lmin([s]), lo, hi, tol=tol)
        ctol = 10.0 * tol * spectral_norm(family.directions[0]) + 1e-13 * (1.0 + spectral_norm(family.base))
        x, val, extra = _newton_1d(family, x, val, lo, hi, ctol)
        point = np.array([x])
        trace.evaluations = nev + extra
    else:
        point, val, nev = _box_ascent(family, box, restarts, seed, lmin)
        trace.evaluations = nev

    w = np.linalg.eigvalsh(family(point))
    scale = 1.0 + np.abs(w).max()
    if _multiplicity(w, "min", 1e-8 * scale) > 1:
        trace.flags.add("multiplicity")
    trace.best_point, trace.best_value = point, val
    return point, val, trace


def _newton_1d(family, gamma, lam, lo, hi, ctol, steps=8):
    """Newton steps on ``t -> lambda_min(H(t))`` while the eigenvalue stays simple.

    Uses ``L' = v^* H_1 v`` and ``L'' = 2 sum_j |v_j^* H_1 v|^2 / (lambda_1 - lambda_j)``.
    """
    D = family.directions[0]
    evals = 0
    for _ in range(steps):
        w, V = family.eigh([gamma])
        evals += 1
        scale = 1.0 + np.abs(w).max()
        if w.size > 1 and w[1] - w[0] <= ctol:
            break
        v = V[:, 0]
        Dv = D @ v
        g = np.vdot(v, Dv).real
        if abs(g) <= 1e-15 * scale:
            break
        c = V[:, 1:].conj().T @ Dv
        h = 2.0 * np.sum(np.abs(c) ** 2 / (w[0] - w[1:]))
        if h >= 0:
            break
        trial = float(np.clip(gamma - g / h, lo, hi))
        wt = float(np.linalg.eigvalsh(family([trial]))[0])
        evals += 1
        if wt < lam - 1e-15 * scale:
            break
        gamma, lam = trial, wt
    return gamma, lam, evals


def _box_ascent(family, box, restarts, seed, lmin):
    lo = np.array([b[0] for b in box])
    hi = np.array([b[1] for b in box])
    scale = 1.0 + spectral_norm(family.base) + sum(spectral_norm(H) for H in family.directions)
    counter = _Counter()
    rng = np.random.default_rng(seed)
    starts = [0.5 * (lo + hi)] + [lo + (hi - lo) * rng.uniform(size=lo.size)
                                   for _ in range(max(restarts, 0))]
    best_t, best_v = None, -np.inf
    for t0 in starts:
        t = t0.copy()
        for mu in scale * 10.0 ** -np.arange(2, 13, 2, dtype=float):
            fun = _smoothed_objective(family, -1.0, mu, counter)
            res = minimize(fun, t, jac=True, method="L-BFGS-B", bounds=list(zip(lo, hi)),
                           options={"maxiter": 200, "ftol": 1e-15, "gtol": 1e-13})
            t = np.clip(res.x, lo, hi)
        t, v = _coordinate_polish(lambda s: lmin(s), t, lo, hi, counter)
        t, v = _newton_box(family, t, v, lo, hi, counter)
        if v > best_v + 1e-14 * scale or best_t is None:
            best_t, best_v = t, v
    return best_t, best_v, counter.n


def _newton_box(family, t, val, lo, hi, counter, steps=10):
    """Projected Newton steps for a simple ``lambda_min`` (smooth near the optimum).

    Coordinates sitting on a bound whose gradient points out of the box are
    held fixed; the others take a Newton step with the analytic Hessian
    ``2 sum_j Re((v^* H_a v_j)(v_j^* H_b v)) / (lambda_1 - lambda_j)``.
    """
    dirs = family.directions
    for _ in range(steps):
        w, V = family.eigh(t)
        counter.n += 1
        scale = 1.0 + np.abs(w).max()
        if w.size < 2 or w[1] - w[0] <= 1e-9 * scale:
            break
        v = V[:, 0]
        C = np.array([V[:, 1:].conj().T @ (H @ v) for H in dirs])
        g = np.array([np.vdot(v, H @ v).real for H in dirs])
        hess = 2.0 * np.real((C.conj() / (w[0] - w[1:])) @ C.T)
        free = ~(((t <= lo) & (g < 0)) | ((t >= hi) & (g > 0)))
        if not free.any() or np.max(np.abs(g[free])) <= 1e-15 * scale:
            break
        step = np.zeros_like(t)
        try:
            step[free] = -np.linalg.solve(hess[np.ix_(free, free)], g[free])
        except np.linalg.LinAlgError:
            break
        trial = np.clip(t + step, lo, hi)
        wt = float(np.linalg.eigvalsh(family(trial))[0])
        counter.n += 1
        if wt < val - 1e-15 * scale:
            break
        t, val = trial, wt
    return t, val


def _coordinate_polish(f, t, lo, hi, counter, sweeps=20):
    """Coordinate golden-section sweeps maximizing ``f`` from ``t``."""
    t = t.copy()
    val = f(t)
    counter.n += 1
    for _ in range(sweeps):
        old = val
        for i in range(t.size):
            width = 1e-3 * max(hi[i] - lo[i], 1e-12)
            a, b = max(lo[i], t[i] - width), min(hi[i], t[i] + width)

            def g(s, i=i):
                u = t.copy()
                u[i] = s
                return f(u)
            x, fx, nev = golden_section_max(g, a, b)
            counter.n += nev
            if fx > val:
                t[i], val = x, fx
        if val - old <= 1e-14 * (1.0 + abs(val)):
            break
    return t, val


def _check_bounded(family, n_angles=720, halfline=False):
    """Raise :class:`Unbounded` if some direction makes ``lambda_max`` decrease forever."""
    k = family.dim
    if k == 1:
        dirs = [np.array([1.0])] if halfline else [np.array([1.0]), np.array([-1.0])]
    elif k == 2:
        th = np.linspace(0, 2 * np.pi, n_angles, endpoint=False)
        dirs = [np.array([np.cos(a), np.sin(a)]) for a in th]
    else:
        raise ValueError("at most two parameters are supported")
    for d in dirs:
        D = np.tensordot(d, family._stack, axes=1)
        top = np.linalg.eigvalsh(D)[-1]
        if top < -1e-10 * (1.0 + spectral_norm(D)):
            raise Unbounded(f"lambda_max decreases without bound along {d.tolist()}")


def _semidefinite_limit(family, halfline):
    """Exact infimum of ``lambda_max(G + t H)`` when ``H`` is semidefinite.

    Along the ray where ``t H <= 0`` the objective is nonincreasing, so the
    infimum is its limit ``lambda_max(U^* G U)`` with ``U`` spanning
    ``ker H``; it is approached only as ``|t| -> inf``. Returns ``None``
    when ``H`` is indefinite.
    """
    H = family.directions[0]
    w = np.linalg.eigvalsh(H)
    tol = 1e-10 * (1.0 + abs(w).max())
    if w[0] < -tol and w[-1] > tol:
        return None
    if w[0] >= -tol and w[-1] <= tol:
        # H = 0: the objective is constant
        return np.zeros(1), float(np.linalg.eigvalsh(family.base)[-1])
    sign = -1.0 if w[0] >= -tol else 1.0
    if halfline and sign < 0:
        return np.zeros(1), float(np.linalg.eigvalsh(family.base)[-1])
    U = np.linalg.eigh(H)[1][:, np.abs(w) <= tol]
    if U.shape[1] == 0:
        raise Unbounded("lambda_max decreases without bound")
    C = U.conj().T @ family.base @ U
    return np.array([sign * np.inf]), float(np.linalg.eigvalsh(0.5 * (C + C.conj().T))[-1])


def minimize_lambda_max_affine(family, halfline=False, radius=None, seed=0):
    """Minimize ``lambda_max(H(t))`` over ``t in R^k`` (``k <= 2``).

    ``halfline=True`` restricts a one-parameter problem to ``t >= 0``.
    For one semidefinite direction the infimum may only be approached as
    ``|t| -> inf``; it is then computed exactly, the returned point is
    ``+-inf`` and the trace carries the ``boundary-approach`` flag.

    Raises
    ------
    Unbounded
        If ``lambda_max`` is unbounded below along some ray.
    """
    k = family.dim
    trace = OptimizerTrace()
    lmax = lambda t: float(np.linalg.eigvalsh(family(t))[-1])  # noqa: E731
    if k == 0:
        val = lmax([])
        trace.evaluations, trace.best_point, trace.best_value = 1, np.zeros(0), val
        return np.zeros(0), val, trace
    if k > 2:
        raise ValueError("at most two parameters are supported")
    _check_bounded(family, halfline=halfline and k == 1)

    nG = spectral_norm(family.base)
    nH = min(max(spectral_norm(H), 1e-300) for H in family.directions)
    if radius is None:
        radius = 1e2 * max(1.0, nG / nH)
    counter = _Counter()

    def f(t):
        counter.n += 1
        return lmax(t)

    if k == 1:
        limit = _semidefinite_limit(family, halfline)
        if limit is not None:
            point, val = limit
            trace.evaluations = 1
            trace.flags.add("boundary-approach")
            trace.best_point, trace.best_value = point, val
            return point, val, trace

    # logarithmic grid seeds the search; the objective is convex
    pos = np.concatenate([[0.0], np.logspace(-4, 0, 25) * radius])
    grid1 = pos if (halfline and k == 1) else np.concatenate([-pos[:0:-1], pos])
    if k == 1:
        vals = [f([s]) for s in grid1]
        i = int(np.argmin(vals))
        a = grid1[max(i - 1, 0)]
        b = grid1[min(i + 1, len(grid1) - 1)]
        while i == len(grid1) - 1 or (i == 0 and not halfline):
            # optimum at the edge of the range: widen it
            radius *= 10.0
            if radius > 1e30:
                raise Unbounded("minimizer escapes every finite range")
            grid1 = grid1 * 10.0
            vals = [f([s]) for s in grid1]
            i = int(np.argmin(vals))
            a = grid1[max(i - 1, 0)]
            b = grid1[min(i + 1, len(grid1) - 1)]
        x, val, nev = golden_section_min(lambda s: f([s]), a, b)
        point = np.array([x])
    else:
        point, val = _minimize_2d(family, f, grid1, radius, counter, seed)

    trace.evaluations = counter.n
    w = np.linalg.eigvalsh(family(point))
    if _multiplicity(w, "max", 1e-8 * (1.0 + np.abs(w).max())) > 1:
        trace.flags.add("multiplicity")
    trace.best_point, trace.best_value = point, val
    return point, val, trace


def _minimize_2d(family, f, grid1, radius, counter, seed):
    g = grid1
    vals = np.array([[f([a, b]) for b in g] for a in g])
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    t = np.array([g[i], g[j]])
    scale = 1.0 + spectral_norm(family.base) + radius * sum(spectral_norm(H) for H in family.directions)
    for _ in range(8):
        for mu in scale * 10.0 ** -np.arange(2, 15, 2, dtype=float):
            fun = _smoothed_objective(family, 1.0, mu, counter)
            res = minimize(fun, t, jac=True, method="BFGS",
                           options={"maxiter": 400, "gtol": 1e-14 * scale})
            if np.all(np.isfinite(res.x)):
                t = res.x
        if np.max(np.abs(t)) < 0.9 * radius:
            break
        radius *= 10.0
        if radius > 1e30:
            raise Unbounded("minimizer escapes every finite range")
    best_t, best_v = t, f(t)
    # Nelder-Mead restarts on the exact function guard against smoothing bias
    rng = np.random.default_rng(seed)
    step = 1e-3 * (1.0 + np.abs(best_t).max())
    for _ in range(3):
        simplex = np.array([best_t, best_t + [step, 0.0], best_t + [0.0, step]])
        res = minimize(f, best_t, method="Nelder-Mead",
                       options={"initial_simplex": simplex, "xatol": 1e-12 * (1.0 + np.abs(best_t).max()),
                                "fatol": 1e-13 * (1.0 + abs(best_v)), "maxiter": 2000})
        if res.fun < best_v:
            best_t, best_v = res.x, float(res.fun)
        step *= 0.1 * (1 + rng.uniform())
    return np.asarray(best_t, dtype=float), best_v


# -- coupled second eigenvalue ----------------------------------------------------

def coupled_block(G, S, t):
    """``[[G, t conj(S)], [t S, G]]``."""
    return np.block([[G, t * S.conj()], [t * S, G]])


def lambda2(M):
    """Second largest eigenvalue of a Hermitian matrix."""
    w = np.linalg.eigvalsh(0.5 * (M + M.conj().T))
    return float(w[-2]) if w.size > 1 else -np.inf


def minimize_lambda2_coupled(G, S, T=None, grid=512, refine=5):
    """Minimize ``lambda_2([[G, t conj(S)], [t S, G]])`` over ``t in [0, T]``.

    The objective need not be convex. A uniform grid of ``grid`` points is
    refined by golden-section search around the ``refine`` best grid points;
    the ``multimodal`` flag is set when the grid shows more than one local
    minimum. Ties are broken toward the smaller ``t``.
    """
    G, S = check_same_size(G, S, names=("G", "S"))
    if hermitian_defect(G) > 1e-10:
        raise NotHermitian("G is not Hermitian")
    G = 0.5 * (G + G.conj().T)
    if spectral_norm(S - S.T) > 1e-10 * (1.0 + spectral_norm(S)):
        raise ValueError("S must be complex symmetric for the block matrix to be Hermitian")
    S = 0.5 * (S + S.T)
    nG, nS = spectral_norm(G), spectral_norm(S)
    if T is None:
        T = 10.0 * max(nG, nG / nS if nS > 0 else 0.0, 1e-12)
    counter = _Counter()

    def f(t):
        counter.n += 1
        return lambda2(coupled_block(G, S, t))

    ts = np.linspace(0.0, T, grid)
    vals = np.array([f(t) for t in ts])
    trace = OptimizerTrace()
    tol = 1e-12 * (1.0 + np.abs(vals).max())
    interior = (vals[1:-1] < vals[:-2] - tol) & (vals[1:-1] <= vals[2:] + tol)
    n_local = int(np.sum(interior)) + int(vals[0] < vals[1] - tol) + int(vals[-1] < vals[-2] - tol)
    if n_local > 1:
        trace.flags.add("multimodal")
    order = np.lexsort((ts, vals))[:refine]
    best_t, best_v = float(ts[order[0]]), float(vals[order[0]])
    h = ts[1] - ts[0] if grid > 1 else T
    for idx in order:
        a, b = max(0.0, ts[idx] - h), min(T, ts[idx] + h)
        x, fx, _ = golden_section_min(f, a, b, tol=1e-12 * max(1.0, T))
        if fx < best_v - tol or (abs(fx - best_v) <= tol and x < best_t):
            best_t, best_v = x, fx
    trace.evaluations = counter.n
    trace.best_point, trace.best_value = np.array([best_t]), best_v
    return best_t, best_v, trace


# -- sphere ---------------------------------------------------------------------

def _numeric_gradient(objective, x, h=1e-6):
    """Wirtinger gradient ``g`` with ``df = 2 Re(g^* dx)`` by central differences."""
    g = np.zeros_like(x)
    step = h * max(1.0, np.linalg.norm(x))
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = step
        dre = (objective(x + e) - objective(x - e)) / (2 * step)
        dim = (objective(x + 1j * e) - objective(x - 1j * e)) / (2 * step)
        g[i] = 0.5 * (dre + 1j * dim)
    return g


def _descend(objective, gradient, U, beta, guard, maxiter, counter):
    def val(b):
        x = U @ b
        if guard is not None and not guard(x):
            return np.inf
        counter.n += 1
        return float(objective(x))

    def grad(b):
        x = U @ b
        g = gradient(x) if gradient is not None else _numeric_gradient(objective, x)
        gb = U.conj().T @ g
        return gb - np.vdot(b, gb).real * b

    beta = beta / np.linalg.norm(beta)
    f0 = val(beta)
    if not np.isfinite(f0):
        return None, np.inf
    g = grad(beta)
    step = 1.0
    prev = None
    for _ in range(maxiter):
        gnorm = np.linalg.norm(g)
        if gnorm <= 1e-12 * (1.0 + abs(f0)):
            break
        if prev is not None:
            s_vec, y_vec = prev
            sy = np.vdot(s_vec, y_vec).real
            if sy > 0:
                step = float(np.clip(np.vdot(s_vec, s_vec).real / sy, 1e-8, 1e8))
        accepted = False
        for _ in range(60):
            cand = beta - step * g
            cand = cand / np.linalg.norm(cand)
            fc = val(cand)
            if fc <= f0 - 1e-4 * step * gnorm ** 2:
                accepted = True
                break
            step *= 0.5
        if not accepted:
            break
        gc = grad(cand)
        prev = (cand - beta, gc - g)
        if abs(f0 - fc) <= 1e-16 * (1.0 + abs(f0)):
            beta, f0, g = cand, fc, gc
            break
        beta, f0, g = cand, fc, gc
    return beta, f0


def minimize_sphere_multistart(objective: Callable, basis=None, starts: int = 32, seed: int = 0,
                               guard: Optional[Callable] = None, gradient: Optional[Callable] = None,
                               init: Sequence = (), maxiter: int = 500, n=None):
    """Minimize ``objective(x)`` over unit vectors ``x`` in ``span(basis)``.

    Parameters
    ----------
    objective : callable
        Real-valued function of a complex vector of length ``n``.
    basis : (n, k) ndarray, optional
        Orthonormal columns; the identity when omitted (then ``n`` is needed).
    starts : int
        Total number of starting points (``init`` first, then random ones).
    guard : callable, optional
        ``guard(x) -> bool``; iterates failing it are rejected.
    gradient : callable, optional
        Wirtinger gradient ``g(x)`` with ``df = 2 Re(g^* dx)``; central
        differences are used when omitted.
    init : sequence of vectors
        Extra starting points given in the full space; they are projected
        onto ``span(basis)``.

    Returns
    -------
    x : ndarray
        Unit minimizer in the full space.
    value : float
    trace : OptimizerTrace

    Raises
    ------
    NoFeasibleStart
        If every start violates ``guard``.
    """
    if starts < 1:
        raise ValueError("starts must be >= 1")
    if basis is None:
        if n is None:
            raise ValueError("give a basis or the dimension n")
        basis = np.eye(n, dtype=complex)
    U = np.asarray(basis, dtype=complex)
    k = U.shape[1]
    if k == 0:
        raise NoFeasibleStart("empty subspace")
    rng = np.random.default_rng(seed)
    cands: List[np.ndarray] = []
    for v in init:
        b = U.conj().T @ np.asarray(v, dtype=complex)
        if np.linalg.norm(b) > 1e-12:
            cands.append(b)
    while len(cands) < starts:
        cands.append(rng.standard_normal(k) + 1j * rng.standard_normal(k))
    counter = _Counter()
    trace = OptimizerTrace()
    best_b, best_v = None, np.inf
    for beta in cands:
        b, v = _descend(objective, gradient, U, beta, guard, maxiter, counter)
        if b is None:
            continue
        if v < best_v:
            best_b, best_v = b, v
    if best_b is None:
        raise NoFeasibleStart("every start violates the feasibility guard")
    x = U @ best_b
    x = x / np.linalg.norm(x)
    trace.evaluations = max(counter.n, 1)
    trace.best_point = np.concatenate([x.real, x.imag])
    trace.best_value = float(best_v)
    return x, float(best_v), trace


__all__ = [
    "OptimizerTrace",
    "AffineHermitianFamily",
    "golden_section_min",
    "golden_section_max",
    "maximize_lambda_min_box",
    "minimize_lambda_max_affine",
    "minimize_lambda2_coupled",
    "minimize_sphere_multistart",
    "coupled_block",
    "lambda2",
]
