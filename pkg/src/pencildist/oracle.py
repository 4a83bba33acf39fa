"""Brute-force verifiers: sampled upper bounds, null-vector residuals, singularity probes.

The sampled bound evaluates, for each trial direction ``v``, the exact cost
of the cheapest admissible perturbation that makes ``v`` a common null
vector. The minimum over the samples is therefore always an upper bound on
the distance computed by the formula modules.
"""

import numpy as np
from scipy.optimize import minimize

from ._validation import check_pair, spectral_norm
from .linalg import kernel_intersection, sigma_min
from .optimize import golden_section_max
from .model import PALINDROMIC, DHTriple, MatrixPolynomial, StructuredPencil, StructureTag, star_op

#: residual threshold factor for a common null vector
NULL_RTOL = 1e-7


def _colnorm2(M, X):
    Y = M @ X
    return np.einsum("ij,ij->j", Y.conj(), Y).real


def _quad(M, X):
    return np.einsum("ij,ij->j", X.conj(), M @ X).real


def _pencil_cost(pencil, tag):
    A, E = pencil.A, pencil.E
    tag = StructureTag.parse(tag if tag is not None else pencil.tag)
    n = A.shape[0]
    if tag in PALINDROMIC:
        As = star_op(A, tag.star)

        def cost(X):
            return np.sqrt(2.0 * np.maximum(_colnorm2(A, X), _colnorm2(As, X)))
    else:
        # the Hermitian-family maps cost exactly as much as the unstructured ones
        def cost(X):
            return np.sqrt(_colnorm2(A, X) + _colnorm2(E, X))
    return [(np.eye(n, dtype=complex), cost)]


def _dh_stratum(triple, allowed, fixed_keys):
    mats = {"J": triple.J, "R": triple.R, "E": triple.E}
    n = triple.n
    fixed = [mats[k] for k in fixed_keys]
    U = kernel_intersection(*fixed) if fixed else np.eye(n, dtype=complex)
    sq = {"R": triple.R @ triple.R, "E": triple.E @ triple.E}

    def cost(X):
        total = np.zeros(X.shape[1])
        if "J" in allowed:
            total += _colnorm2(mats["J"], X)
        for k in ("R", "E"):
            if k in allowed:
                num = _quad(sq[k], X)
                den = _quad(mats[k], X)
                with np.errstate(divide="ignore", invalid="ignore"):
                    r = np.where(num <= 0.0, 0.0, num / den)
                r = np.where((num > 0.0) & (den <= 0.0), np.inf, r)
                total += r ** 2
        return np.sqrt(total)
    return U, cost


def _dh_cost(triple, kind):
    from .dh import DHDistanceKind

    kind = DHDistanceKind.parse(kind if kind is not None else "JRE")
    if kind is DHDistanceKind.UNSTRUCTURED:
        mats = (triple.J, triple.R, triple.E)

        def cost(X):
            return np.sqrt(sum(_colnorm2(M, X) for M in mats))
        return [(np.eye(triple.n, dtype=complex), cost)]
    allowed = kind.allowed
    fixed = [k for k in "JRE" if k not in allowed]
    # x in ker R (or ker E) costs nothing for that matrix; this set has measure
    # zero on the sphere, so it is sampled as its own stratum
    optional = [k for k in ("R", "E") if k in allowed]
    strata = []
    for mask in range(1 << len(optional)):
        drop = [optional[i] for i in range(len(optional)) if mask >> i & 1]
        keep = frozenset(allowed) - set(drop)
        strata.append(_dh_stratum(triple, keep, fixed + drop))
    return strata


def _poly_cost(P, tag):
    tag = StructureTag.parse(tag if tag is not None else P.tag)
    n, m = P.n, P.degree
    if tag in PALINDROMIC:
        star = tag.star

        def cost(X):
            total = np.zeros(X.shape[1])
            for j in range((m + 1) // 2):
                Aj = P.coeffs[j]
                total += 2.0 * np.maximum(_colnorm2(Aj, X), _colnorm2(star_op(Aj, star), X))
            if m % 2 == 0:
                total += _colnorm2(P.coeffs[m // 2], X)
            return np.sqrt(total)
    else:
        def cost(X):
            return np.sqrt(sum(_colnorm2(Aj, X) for Aj in P.coeffs))
    return [(np.eye(n, dtype=complex), cost)]


def cost_function(obj, tag=None):
    """List of ``(basis, cost)`` strata; ``cost(X)`` maps unit columns of ``X`` to costs.

    The admissible directions are the unit vectors in the ranges of the bases.

    ``tag`` is a structure tag for pencils and polynomials, a DH distance
    kind for DH triples.
    """
    if isinstance(obj, DHTriple):
        return _dh_cost(obj, tag)
    if isinstance(obj, StructuredPencil):
        return _pencil_cost(obj, tag)
    if isinstance(obj, MatrixPolynomial):
        return _poly_cost(obj, tag)
    if isinstance(obj, (tuple, list)) and len(obj) == 2:
        A, E = check_pair(*obj)
        return _pencil_cost(StructuredPencil(A, E), tag)
    raise TypeError(f"unsupported object {type(obj).__name__}")


def sample_null_space_witness(obj, tag=None, trials=100_000, seed=0, include=(),
                              polish=True, batch=20_000, n_polish=5):
    """Best sampled direction and its cost; see :func:`sample_null_space_upper_bound`.

    Returns
    -------
    value : float
        ``inf`` when the admissible subspace is trivial.
    x : ndarray or None
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    value, x = np.inf, None
    for U, cost in cost_function(obj, tag):
        if U.shape[1] == 0:
            continue
        val, y = _sample_stratum(U, cost, trials, seed, include, polish, batch, n_polish)
        if val < value:
            value, x = val, y
    return value, x


def _sample_stratum(U, cost, trials, seed, include, polish, batch, n_polish):
    k = U.shape[1]
    rng = np.random.default_rng(seed)
    best_vals, best_cols = [], []
    done = 0
    while done < trials:
        size = min(batch, trials - done)
        B = rng.standard_normal((k, size)) + 1j * rng.standard_normal((k, size))
        X = U @ B
        X /= np.linalg.norm(X, axis=0)
        c = cost(X)
        idx = np.argsort(c)[:n_polish]
        best_vals.extend(c[idx].tolist())
        best_cols.extend(X[:, i] for i in idx)
        done += size
    for v in include:
        # only directions inside this stratum are admissible here
        v = np.asarray(v, dtype=complex).reshape(-1)
        v = U @ (U.conj().T @ v)
        nv = np.linalg.norm(v)
        if nv == 0:
            continue
        v = v / nv
        best_vals.append(float(cost(v[:, None])[0]))
        best_cols.append(v)
    order = np.argsort(best_vals, kind="stable")
    value, x = float(best_vals[order[0]]), best_cols[order[0]]
    if polish and np.isfinite(value):
        for i in order[:n_polish]:
            if not np.isfinite(best_vals[i]):
                continue
            val, y = _polish(U, cost, best_cols[i])
            if val < value:
                value, x = val, y
    return value, x


def _polish(U, cost, x0):
    """Nelder-Mead on the real coordinates of ``beta`` with ``x = U beta / ||U beta||``."""
    k = U.shape[1]
    beta0 = U.conj().T @ x0

    def f(p):
        b = p[:k] + 1j * p[k:]
        nb = np.linalg.norm(b)
        if nb == 0:
            return np.inf
        return float(cost((U @ (b / nb))[:, None])[0])

    p0 = np.concatenate([beta0.real, beta0.imag])
    res = minimize(f, p0, method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14, "maxiter": 4000 * k, "adaptive": True})
    b = res.x[:k] + 1j * res.x[k:]
    x = U @ (b / np.linalg.norm(b))
    return float(cost(x[:, None])[0]), x


def sample_null_space_upper_bound(obj, tag=None, trials=100_000, seed=0, include=(),
                                  polish=True):
    """Minimum sampled cost of a common null vector: an upper bound on the distance.

    Parameters
    ----------
    obj : StructuredPencil, DHTriple, MatrixPolynomial or (A, E)
    tag : structure tag or DH kind, optional
        Defaults to the object's own tag (``"JRE"`` for DH triples).
    trials : int
        Number of directions drawn uniformly from the unit sphere of the
        admissible subspace.
    include : sequence of vectors
        Extra directions (for instance a reported witness) evaluated as well.
    polish : bool
        Refine the best samples with Nelder-Mead; the result stays a valid
        upper bound because every evaluated point is an admissible direction.
    """
    return sample_null_space_witness(obj, tag, trials, seed, include, polish)[0]


def verify_common_null(matrices, witness):
    """``max_k ||M_k w||`` for the unit-normalized witness ``w``."""
    if isinstance(matrices, dict):
        matrices = list(matrices.values())
    w = np.asarray(witness, dtype=complex).reshape(-1)
    nw = np.linalg.norm(w)
    if nw == 0:
        return np.inf
    w = w / nw
    return float(max(np.linalg.norm(np.asarray(M) @ w) for M in matrices))


def is_common_null(matrices, witness, rtol=NULL_RTOL):
    """PASS test: residual at most ``rtol * (1 + max ||M_k||)``."""
    if isinstance(matrices, dict):
        matrices = list(matrices.values())
    scale = 1.0 + max(spectral_norm(M) for M in matrices)
    return verify_common_null(matrices, witness) <= rtol * scale


def probe_points(A, E, count, seed=0):
    """``count`` distinct points on a jittered circle of radius ``1 + ||A|| / (1 + ||E||)``."""
    radius = 1.0 + spectral_norm(A) / (1.0 + spectral_norm(E))
    rng = np.random.default_rng(seed)
    base = 2.0 * np.pi * np.arange(count) / count
    jitter = rng.uniform(-0.25, 0.25, size=count) * 2.0 * np.pi / count
    return radius * np.exp(1j * (base + jitter + 0.1))


def singularity_probe(A, E, grid=None, seed=0, rtol=1e-8):
    """Largest ``sigma_min(A + lambda E)`` over a grid of ``lambda`` values.

    Returns
    -------
    max_sigma : float
    verdict : str
        ``"singular-consistent"`` when every grid point gives
        ``sigma_min <= rtol * (1 + ||A|| + |lambda| ||E||)``, else ``"regular"``.
    """
    A, E = check_pair(A, E)
    n = A.shape[0]
    count = n + 1 if grid is None else int(grid)
    if count < n + 1:
        raise ValueError("the grid needs at least n + 1 points")
    nA, nE = spectral_norm(A), spectral_norm(E)
    worst = 0.0
    singular = True
    for lam in probe_points(A, E, count, seed):
        s = sigma_min(A + lam * E)
        worst = max(worst, s)
        if s > rtol * (1.0 + nA + abs(lam) * nE):
            singular = False
    return worst, ("singular-consistent" if singular else "regular")


# -- backward errors -----------------------------------------------------------------
#
# A pencil is singular at lam with null vector x exactly when the perturbation
# pair maps x to images (y_A, y_E) with y_A + lam y_E = L(lam) x. For unit x the
# cheapest map of each class costs ||y|| (general, Hermitian when Im x^* y = 0,
# skew-Hermitian when Re x^* y = 0; two-sided max(||a||, ||b||)), so each x
# leads to a small real least-squares problem.

def _real(M):
    """Real ``2n x 2n`` matrix of ``z -> M z`` in coordinates ``[Re z; Im z]``."""
    return np.block([[M.real, -M.imag], [M.imag, M.real]])


def _functional(c):
    """Real rows giving ``Re(c z)`` and ``Im(c z)``."""
    return np.concatenate([c.real, -c.imag]), np.concatenate([c.imag, c.real])


def _constrained_ls(blocks, C, d):
    """``min sum_k w_k ||P_k z - q_k||^2`` over real ``z`` with ``C z = d``."""
    m = C.shape[0]
    Q = sum(w * P.T @ P for w, P, _ in blocks)
    g = sum(w * P.T @ q for w, P, q in blocks)
    K = np.block([[2.0 * Q, C.T], [C, np.zeros((m, m))]])
    rhs = np.concatenate([2.0 * g, d])
    sol = np.linalg.lstsq(K, rhs, rcond=None)[0]
    z = sol[:Q.shape[0]]
    return z, [float(np.sum((P @ z - q) ** 2)) for _, P, q in blocks]


_BLOCK_KINDS = {
    "unstructured": (None, None),
    "hermitian": ("herm", "herm"),
    "skew-hermitian": ("skew", "skew"),
    "star-even": ("herm", "skew"),
    "star-odd": ("skew", "herm"),
}


def _kind_rows(x, kind, offset_z, offset_c):
    """Constraint rows for ``y = offset_c + offset_z z`` of the given class."""
    if kind is None:
        return [], []
    c = x.conj() @ offset_z
    re, im = _functional(c)
    base = np.vdot(x, offset_c)
    if kind == "herm":
        return [im], [-base.imag]
    return [re], [-base.real]


def _inner_split(A, E, lam, x, structure):
    """Cheapest squared cost of a perturbation pair that annihilates ``L(lam)`` at ``x``."""
    n = x.size
    r = (A + lam * E) @ x
    I = np.eye(n)
    # z = y_E, y_A = r - lam z
    PA, qA = _real(-lam * I), -np.concatenate([r.real, r.imag])
    PE, qE = np.eye(2 * n), np.zeros(2 * n)
    ka, ke = _BLOCK_KINDS[structure]
    rows, rhs = [], []
    for kind, oz, oc in ((ka, -lam * I, r), (ke, I, np.zeros(n))):
        rr, dd = _kind_rows(x, kind, oz, oc)
        rows += rr
        rhs += dd
    C = np.array(rows).reshape(len(rows), 2 * n)
    _, costs = _constrained_ls([(1.0, PA, qA), (1.0, PE, qE)], C, np.array(rhs))
    return sum(costs)


def _inner_palindromic(A, lam, star, x):
    """``2 min max(||a||^2, ||b||^2)`` over ``a + lam b = L(lam) x`` (consistent images)."""
    n = x.size
    As = star_op(A, star)
    r = (A + lam * As) @ x
    I = np.eye(n)
    # z = b = Delta^star x, a = r - lam z
    Pa, qa = _real(-lam * I), -np.concatenate([r.real, r.imag])
    Pb, qb = np.eye(2 * n), np.zeros(2 * n)
    if star == "*":
        # x^* b = conj(x^* a)
        cb_re, cb_im = _functional(x.conj())
        ca_re, ca_im = _functional(-lam * x.conj())
        base = np.vdot(x, r)
        rows = [cb_re - ca_re, cb_im + ca_im]
        rhs = [base.real, -base.imag]
    else:
        # x^T a = x^T b
        c_re, c_im = _functional(x @ ((1.0 + lam) * I))
        base = x @ r
        rows = [c_re, c_im]
        rhs = [base.real, base.imag]
    C, d = np.array(rows), np.array(rhs)

    def dual(w):
        _, (ca, cb) = _constrained_ls([(w, Pa, qa), (1.0 - w, Pb, qb)], C, d)
        return w * ca + (1.0 - w) * cb

    _, val, _ = golden_section_max(dual, 0.0, 1.0)
    return 2.0 * val


def backward_error_witness(A, E, lam, structure="unstructured", trials=2000, seed=0,
                           polish=True, n_polish=3):
    """Best null vector found by :func:`sample_backward_error` and its squared cost."""
    A = np.asarray(A, dtype=complex)
    E = np.asarray(E, dtype=complex)
    lam = complex(lam)
    n = A.shape[0]
    tag = StructureTag.parse(structure)
    if tag in PALINDROMIC:
        def f(x):
            return _inner_palindromic(A, lam, tag.star, x)
    else:
        def f(x):
            return _inner_split(A, E, lam, x, tag.value)
    rng = np.random.default_rng(seed)
    X = rng.standard_normal((n, trials)) + 1j * rng.standard_normal((n, trials))
    X /= np.linalg.norm(X, axis=0)
    vals = np.array([f(X[:, i]) for i in range(trials)])
    order = np.argsort(vals)
    best, x = float(vals[order[0]]), X[:, order[0]]
    if polish:
        def g(p):
            z = p[:n] + 1j * p[n:]
            nz = np.linalg.norm(z)
            return np.inf if nz == 0 else f(z / nz)

        for i in order[:n_polish]:
            x0 = X[:, i]
            res = minimize(g, np.concatenate([x0.real, x0.imag]), method="Nelder-Mead",
                           options={"xatol": 1e-10, "fatol": 1e-14, "maxiter": 3000 * n,
                                    "adaptive": True})
            if res.fun < best:
                z = res.x[:n] + 1j * res.x[n:]
                best, x = float(res.fun), z / np.linalg.norm(z)
    return best, x


def sample_backward_error(A, E, lam, structure="unstructured", trials=2000, seed=0,
                          polish=True, n_polish=3):
    """Direct minimization of the structured backward error over null vectors.

    Every evaluated unit vector ``x`` yields an admissible perturbation, so
    the result bounds the backward error from above and converges to it as
    the search over ``x`` succeeds.

    Parameters
    ----------
    structure : str
        ``"unstructured"``, ``"hermitian"``, ``"skew-hermitian"``,
        ``"*-even"``, ``"*-odd"``, ``"*-palindromic"`` or ``"T-palindromic"``
        (``E`` is ignored for the palindromic ones).
    """
    best, _ = backward_error_witness(A, E, lam, structure, trials, seed, polish, n_polish)
    return float(np.sqrt(max(best, 0.0)))

__all__ = [
    "cost_function",
    "sample_null_space_upper_bound",
    "sample_null_space_witness",
    "verify_common_null",
    "is_common_null",
    "singularity_probe",
    "probe_points",
    "sample_backward_error",
]
