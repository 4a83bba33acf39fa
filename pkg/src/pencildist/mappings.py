"""Minimal spectral-norm structured mappings ``Delta x = y``.

The Hermitian and two-sided constructions complete the fixed first
row/column of ``Delta`` (in a unitary basis adapted to ``x``) with the
Davis-Kahan-Weinberger (Parrott) minimal completion, which attains the
lower bound ``max(||y||, ||z||) / ||x||`` exactly. Each result is checked
against that bound before it is returned.
"""

import numpy as np

from ._validation import as_complex_vector, spectral_norm
from .exceptions import InfeasibleMapping, NoConvergence, ZeroVector
from .model import star_op

FEASIBILITY_RTOL = 1e-10
_NORM_RTOL = 1e-8


def _unit(x, name="x"):
    x = as_complex_vector(x, name)
    nx = np.linalg.norm(x)
    if nx == 0:
        raise ZeroVector(f"{name} must be nonzero")
    return x / nx, nx


def _parrott(a, col, row, left, right):
    """Assemble ``Delta`` from its first column/row in adapted bases.

    ``left``/``right`` are unit vectors, ``a = left^* Delta right``,
    ``col = (I - left left^*) Delta right`` and
    ``row = left^* Delta (I - right right^*)`` (as a 1-D array).
    """
    mu2 = max(abs(a) ** 2 + np.vdot(col, col).real, abs(a) ** 2 + np.vdot(row, row).real)
    D = a * np.outer(left, right.conj()) + np.outer(left, row) + np.outer(col, right.conj())
    gap = mu2 - abs(a) ** 2
    if gap > 1e-300 and np.linalg.norm(col) > 0 and np.linalg.norm(row) > 0:
        D -= (np.conj(a) / gap) * np.outer(col, row)
    return D, np.sqrt(mu2)


def _check_norm(D, target):
    got = spectral_norm(D)
    if abs(got - target) > _NORM_RTOL * max(1.0, target):
        raise NoConvergence(f"mapping norm {got!r} misses the minimal value {target!r}")


def general_map(x, y):
    """Minimal-norm (rank one) ``Delta`` with ``Delta x = y``: ``y x^dagger``."""
    xh, nx = _unit(x)
    y = as_complex_vector(y, "y")
    return np.outer(y / nx, xh.conj())


def hermitian_map(x, y, rtol=FEASIBILITY_RTOL):
    """Hermitian ``H`` of minimal spectral norm ``||y|| / ||x||`` with ``H x = y``.

    Raises
    ------
    ZeroVector
        If ``x = 0``.
    InfeasibleMapping
        If ``Im(x^* y)`` exceeds ``rtol * ||x|| ||y||``.
    """
    xh, nx = _unit(x)
    y = as_complex_vector(y, "y") / nx
    xy = np.vdot(xh, y)
    if abs(xy.imag) > rtol * max(np.linalg.norm(y), 1e-300):
        raise InfeasibleMapping("Im(x^* y) != 0: no Hermitian matrix maps x to y")
    a = xy.real
    b = y - xy * xh
    H, mu = _parrott(a, b, b.conj(), xh, xh)
    H = 0.5 * (H + H.conj().T)
    _check_norm(H, mu)
    return H


def skew_hermitian_map(x, y, rtol=FEASIBILITY_RTOL):
    """Skew-Hermitian ``S`` of minimal norm with ``S x = y``.

    Feasible iff ``Re(x^* y) = 0``; built as ``i * hermitian_map(x, -i y)``.
    """
    xh, _ = _unit(x)
    y = as_complex_vector(y, "y")
    if abs(np.vdot(xh, y).real) > rtol * max(np.linalg.norm(y), 1e-300):
        raise InfeasibleMapping("Re(x^* y) != 0: no skew-Hermitian matrix maps x to y")
    return 1j * hermitian_map(x, -1j * y, rtol=np.inf)


def two_sided_map(x, y, z, star="*", rtol=FEASIBILITY_RTOL):
    """Minimal-norm ``Delta`` with ``Delta x = y`` and ``Delta^star x = z``.

    Feasible iff ``x^star y = z^star x``; the norm is then
    ``max(||y||, ||z||) / ||x||``.
    """
    xh, nx = _unit(x)
    y = as_complex_vector(y, "y") / nx
    z = as_complex_vector(z, "z") / nx
    if star == "*":
        lhs, rhs = np.vdot(xh, y), np.vdot(z, xh)
        w, u = xh, z
    elif star == "T":
        lhs, rhs = xh @ y, z @ xh
        # Delta^T x = z  <=>  conj(x)^* Delta = conj(z)^*
        w, u = xh.conj(), z.conj()
    else:
        raise ValueError(f"star must be '*' or 'T', got {star!r}")
    if abs(lhs - rhs) > rtol * max(np.linalg.norm(y) + np.linalg.norm(z), 1e-300):
        raise InfeasibleMapping("x^star y != z^star x: two-sided mapping is infeasible")
    a = np.vdot(w, y)
    col = y - a * w
    row = u.conj() - np.vdot(u, xh) * xh.conj()
    D, mu = _parrott(a, col, row, w, xh)
    _check_norm(D, mu)
    return D


def self_star_map(x, y, star="*"):
    """Minimal-norm ``Delta = Delta^star`` with ``Delta x = y``.

    ``star='*'`` is the Hermitian mapping (needs ``Im(x^* y) = 0``);
    ``star='T'`` gives a complex symmetric matrix, which always exists.
    """
    if star == "*":
        return hermitian_map(x, y)
    D = two_sided_map(x, y, y, "T")
    D = 0.5 * (D + D.T)
    xh, nx = _unit(x)
    _check_norm(D, np.linalg.norm(as_complex_vector(y)) / nx)
    return D


def negative_semidefinite_map(x, y):
    """Minimal-norm ``Delta <= 0`` with ``Delta x = y`` (needs ``x^* y < 0``).

    The minimizer is the rank-one matrix ``y y^* / (x^* y)`` of norm
    ``||y||^2 / |x^* y|``.
    """
    x = as_complex_vector(x, "x", nonzero=True)
    y = as_complex_vector(y, "y")
    xy = np.vdot(x, y)
    if not (xy.real < 0 and abs(xy.imag) <= FEASIBILITY_RTOL * abs(xy)):
        raise InfeasibleMapping("x^* y must be negative for a semidefinite mapping")
    D = np.outer(y, y.conj()) / xy.real
    return 0.5 * (D + D.conj().T)


def dissipation_cut(H, x):
    """``-(Hx)(Hx)^* / (x^* H x)`` for ``H >= 0``; zero when ``Hx = 0``.

    ``H`` plus the result stays positive semidefinite and annihilates ``x``.
    """
    Hx = H @ x
    q = np.vdot(x, Hx).real
    if q <= 0 or np.linalg.norm(Hx) == 0:
        return np.zeros_like(H)
    D = -np.outer(Hx, Hx.conj()) / q
    return 0.5 * (D + D.conj().T)


__all__ = [
    "general_map",
    "hermitian_map",
    "skew_hermitian_map",
    "two_sided_map",
    "self_star_map",
    "negative_semidefinite_map",
    "dissipation_cut",
    "star_op",
]
