import numpy as np
import pytest
from hypothesis import given, strategies as st

from pencildist.exceptions import InfeasibleMapping, ZeroVector
from pencildist.mappings import (
    dissipation_cut,
    general_map,
    hermitian_map,
    negative_semidefinite_map,
    self_star_map,
    skew_hermitian_map,
    two_sided_map,
)
from pencildist.model import star_op

from conftest import crandn, rand_herm

nrm = np.linalg.norm


def spec(M):
    return np.linalg.norm(M, 2)


def closed_form_hermitian(x, y):
    """Rank-two Hermitian solution of H x = y (not norm-minimal in general)."""
    n2 = np.vdot(x, x).real
    return (np.outer(y, x.conj()) + np.outer(x, y.conj())) / n2 \
        - np.vdot(x, y) * np.outer(x, x.conj()) / n2 ** 2


def test_general_map(rng):
    x, y = crandn(rng, 4), crandn(rng, 4)
    D = general_map(x, y)
    assert nrm(D @ x - y) < 1e-12
    assert abs(spec(D) - nrm(y) / nrm(x)) < 1e-12


def test_hermitian_map_examples(rng):
    e1 = np.array([1.0, 0, 0])
    H = hermitian_map(e1, e1)
    assert abs(spec(H) - 1) < 1e-12 and nrm(H @ e1 - e1) < 1e-12
    with pytest.raises(InfeasibleMapping):
        hermitian_map(e1, 1j * e1)
    with pytest.raises(ZeroVector):
        hermitian_map(np.zeros(3), e1)


def test_hermitian_map_random_feasible(rng):
    for _ in range(20):
        x = crandn(rng, 5)
        y = rand_herm(rng, 5) @ x
        H = hermitian_map(x, y)
        assert nrm(H - H.conj().T) < 1e-12
        assert nrm(H @ x - y) < 1e-10 * nrm(y)
        assert abs(spec(H) - nrm(y) / nrm(x)) < 1e-9 * nrm(y) / nrm(x)
        # the explicit rank-two formula maps x to y as well and is never smaller
        F = closed_form_hermitian(x, y)
        assert nrm(F @ x - y) < 1e-10 * nrm(y)
        assert spec(F) >= spec(H) - 1e-10


def test_skew_map_examples(rng):
    e1 = np.array([1.0, 0])
    S = skew_hermitian_map(e1, 1j * e1)
    assert abs(spec(S) - 1) < 1e-12 and nrm(S + S.conj().T) < 1e-12
    with pytest.raises(InfeasibleMapping):
        skew_hermitian_map(e1, e1)
    B = crandn(rng, 4, 4)
    J = 0.5 * (B - B.conj().T)
    x = crandn(rng, 4)
    S = skew_hermitian_map(x, -J @ x)
    assert nrm(S @ x + J @ x) < 1e-10 and abs(spec(S) - nrm(J @ x) / nrm(x)) < 1e-9


@pytest.mark.parametrize("star", ["*", "T"])
def test_two_sided_examples(rng, star):
    x = crandn(rng, 4)
    D = two_sided_map(x, np.zeros(4), np.zeros(4), star)
    assert nrm(D) < 1e-14
    A = crandn(rng, 4, 4)
    e1 = np.eye(4)[:, 0]
    y, z = A @ e1, star_op(A, star) @ e1
    D = two_sided_map(e1, y, z, star)
    assert nrm(D @ e1 - y) < 1e-9 and nrm(star_op(D, star) @ e1 - z) < 1e-9
    assert abs(spec(D) - max(nrm(y), nrm(z))) < 1e-8
    with pytest.raises(InfeasibleMapping):
        two_sided_map(e1, y, z + 1e-3 * e1, star)


@pytest.mark.parametrize("star", ["*", "T"])
def test_two_sided_against_convex_solver(rng, star):
    cp = pytest.importorskip("cvxpy")
    n = 3
    A = crandn(rng, n, n)
    x = crandn(rng, n)
    y, z = A @ x, star_op(A, star) @ x
    D = two_sided_map(x, y, z, star)
    V = cp.Variable((n, n), complex=True)
    Vs = V.H if star == "*" else V.T
    prob = cp.Problem(cp.Minimize(cp.sigma_max(V)), [V @ x == y, Vs @ x == z])
    prob.solve()
    assert abs(spec(D) - prob.value) <= 1e-5 * prob.value


def test_self_star_map(rng):
    x, y = crandn(rng, 4), crandn(rng, 4)
    D = self_star_map(x, y, "T")
    assert nrm(D - D.T) < 1e-12 and nrm(D @ x - y) < 1e-9
    assert abs(spec(D) - nrm(y) / nrm(x)) < 1e-8


def test_semidefinite_maps(rng):
    B = crandn(rng, 4, 2)
    R = B @ B.conj().T
    x = crandn(rng, 4)
    D = dissipation_cut(R, x)
    assert np.linalg.eigvalsh(R + D)[0] >= -1e-10 * spec(R)
    assert nrm((R + D) @ x) < 1e-10 * spec(R) * nrm(x)
    assert np.linalg.eigvalsh(D)[-1] <= 1e-12
    N = negative_semidefinite_map(x, -R @ x)
    assert nrm(N @ x + R @ x) < 1e-10 * spec(R) * nrm(x)
    with pytest.raises(InfeasibleMapping):
        negative_semidefinite_map(x, R @ x)
    assert nrm(dissipation_cut(np.zeros((3, 3)), np.ones(3))) == 0


@given(st.integers(0, 10 ** 6), st.integers(1, 7), st.sampled_from(["*", "T"]))
def test_two_sided_norm_property(seed, n, star):
    rng = np.random.default_rng(seed)
    A, x = crandn(rng, n, n), crandn(rng, n)
    y, z = A @ x, star_op(A, star) @ x
    D = two_sided_map(x, y, z, star)
    scale = max(nrm(y), nrm(z)) / nrm(x)
    assert abs(spec(D) - scale) <= 1e-8 * max(1, scale)
    assert nrm(D @ x - y) <= 1e-9 * (1 + nrm(y))
