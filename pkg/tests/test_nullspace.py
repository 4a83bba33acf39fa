import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.optimize import minimize

from pencildist.exceptions import DimensionMismatch, InvalidStructure
from pencildist.model import StructuredPencil, random_structured, star_op
from pencildist.nullspace import (
    delta0_A_only,
    delta0_E_only,
    delta0_palindromic,
    delta0_structured,
    delta0_unstructured,
    palindromic_objective,
    upper_bound_trivial,
)
from pencildist.oracle import sample_null_space_upper_bound

from conftest import crandn, rand_herm

nrm = np.linalg.norm
HERM_TAGS = ["hermitian", "skew-hermitian", "star-even", "star-odd"]


def spec(M):
    return np.linalg.norm(M, 2)


def unit_columns(rng, n, k):
    X = crandn(rng, n, k)
    return X / nrm(X, axis=0)


def check_report(rep, tol=1e-8):
    assert rep.finite and rep.witness is not None
    v = rep.witness / nrm(rep.witness)
    scale = 1 + sum(spec(M) for M in rep.inputs.values())
    for M in rep.perturbed().values():
        assert nrm(M @ v) <= tol * scale
    assert abs(rep.combined_norm() - rep.value) <= tol * max(1, rep.value)


def test_unstructured_examples():
    assert abs(delta0_unstructured(np.diag([1.0, 2]), np.diag([3.0, 4])).value - np.sqrt(10)) < 1e-12
    assert abs(delta0_unstructured(np.eye(2), np.eye(2)).value - np.sqrt(2)) < 1e-12
    with pytest.raises(DimensionMismatch):
        delta0_unstructured(np.eye(2), np.eye(3))


def test_unstructured_random_direction_oracle(rng):
    A, E = crandn(rng, 5, 5), crandn(rng, 5, 5)
    rep = delta0_unstructured(A, E)
    X = unit_columns(rng, 5, 10 ** 4)
    sampled = np.sqrt(nrm(A @ X, axis=0) ** 2 + nrm(E @ X, axis=0) ** 2)
    assert rep.value <= sampled.min() + 1e-12
    v = rep.witness
    assert abs(np.sqrt(nrm(A @ v) ** 2 + nrm(E @ v) ** 2) - rep.value) < 1e-8
    check_report(rep)
    assert np.linalg.matrix_rank(rep.perturbations["A"], tol=1e-9 * spec(A)) == 1


def test_one_sided_examples():
    A = np.array([[1.0, 2], [3, 4]])
    r = delta0_A_only(A, np.diag([1.0, 0]))
    assert abs(r.value - np.sqrt(20)) < 1e-12
    check_report(r)
    assert delta0_A_only(A, np.eye(2)).value == np.inf
    r = delta0_E_only(np.diag([0.0, 1]), A)
    assert abs(r.value - np.sqrt(10)) < 1e-12
    assert delta0_E_only(np.eye(2), A).value == np.inf


def test_one_sided_swap_symmetry(rng):
    A = crandn(rng, 4, 2) @ crandn(rng, 2, 4)
    E = crandn(rng, 4, 4)
    assert abs(delta0_E_only(A, E).value - delta0_A_only(E, A).value) < 1e-12


def test_A_only_kernel_grid_oracle(rng):
    n = 5
    A = crandn(rng, n, n)
    E = crandn(rng, n, 3) @ crandn(rng, 3, n)
    rep = delta0_A_only(A, E)
    U = np.linalg.svd(E)[2].conj().T[:, 3:]

    def cost(p):
        th, ph = p
        b = np.array([np.cos(th), np.sin(th) * np.exp(1j * ph)])
        return nrm(A @ (U @ b))

    th, ph = np.meshgrid(np.linspace(0, np.pi / 2, 201), np.linspace(0, 2 * np.pi, 201))
    vals = np.array([cost(p) for p in zip(th.ravel(), ph.ravel())])
    i = int(np.argmin(vals))
    res = minimize(cost, [th.ravel()[i], ph.ravel()[i]], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-14})
    assert abs(res.fun - rep.value) <= 1e-6
    check_report(rep)


def test_structured_examples():
    rep = delta0_structured(StructuredPencil(np.diag([1.0, 2]), np.diag([3.0, 4]), "hermitian"))
    assert abs(rep.value - np.sqrt(10)) < 1e-12
    for D in rep.perturbations.values():
        assert nrm(D - D.conj().T) < 1e-12
    with pytest.raises(InvalidStructure):
        delta0_structured(StructuredPencil([[0, 1], [2, 0]], np.eye(2), "hermitian"))


@pytest.mark.parametrize("tag", HERM_TAGS)
def test_structured_equals_unstructured(tag):
    for seed in range(10):
        p = random_structured(tag, 2 + seed % 6, seed=seed)
        rep = delta0_structured(p)
        assert abs(rep.value - delta0_unstructured(p.A, p.E).value) <= 1e-10
        check_report(rep)
        dA, dE = rep.perturbations["A"], rep.perturbations["E"]
        sA = 1 if tag in ("hermitian", "star-even") else -1
        sE = 1 if tag in ("hermitian", "star-odd") else -1
        assert nrm(dA - sA * dA.conj().T) <= 1e-10 * (1 + spec(dA))
        assert nrm(dE - sE * dE.conj().T) <= 1e-10 * (1 + spec(dE))
        v = rep.witness
        assert abs(spec(dA) - nrm(p.A @ v)) < 1e-9 and abs(spec(dE) - nrm(p.E @ v)) < 1e-9


def test_palindromic_examples():
    r = delta0_palindromic(np.diag([1.0, 2]), "*")
    assert abs(r.value - np.sqrt(2)) < 1e-10
    for star in "*T":
        r = delta0_palindromic(np.eye(3), star)
        assert abs(r.value - np.sqrt(2)) < 1e-10
        check_report(r)


@pytest.mark.parametrize("star", ["*", "T"])
def test_palindromic_random_oracle(rng, star):
    A = crandn(rng, 4, 4)
    As = star_op(A, star)
    r = delta0_palindromic(A, star)
    assert r.value >= np.sqrt(2) * np.linalg.svd(A, compute_uv=False)[-1] - 1e-10
    X = unit_columns(rng, 4, 10 ** 4)
    sampled = 2 * np.maximum(nrm(A @ X, axis=0) ** 2, nrm(As @ X, axis=0) ** 2)
    assert r.value ** 2 <= sampled.min() + 1e-10
    D = A.conj().T @ A - As.conj().T @ As
    v = r.witness
    assert abs(np.vdot(v, D @ v)) <= 1e-7 * (1 + spec(A) ** 2)
    check_report(r)
    dA = r.perturbations["A"]
    assert nrm(r.perturbations["E"] - star_op(dA, star)) < 1e-12
    assert abs(spec(dA) - max(nrm(A @ v), nrm(As @ v))) < 1e-8


@pytest.mark.parametrize("star", ["*", "T"])
def test_palindromic_objective_is_concave_on_grid(rng, star):
    A = crandn(rng, 5, 5)
    g = np.linspace(0, 1, 101)
    f = np.array([palindromic_objective(A, star, t) for t in g])
    # second differences of a concave function are nonpositive
    assert np.all(f[:-2] - 2 * f[1:-1] + f[2:] <= 1e-10 * (1 + abs(f).max()))
    r = delta0_palindromic(A, star)
    assert r.value ** 2 / 2 >= f.max() - 1e-10


def test_pencil_value_matches_direction_sampler(rng):
    p = random_structured("t-palindromic", 3, seed=5)
    r = delta0_structured(p)
    ub = sample_null_space_upper_bound(p, trials=20_000, seed=1)
    assert r.value <= ub + 1e-9 and ub <= r.value * 1.02


seeds = st.integers(0, 10 ** 6)


@given(seeds, st.integers(1, 7), st.floats(0.01, 100))
def test_scaling(seed, n, c):
    rng = np.random.default_rng(seed)
    A, E = crandn(rng, n, n), crandn(rng, n, n)
    a = delta0_unstructured(c * A, c * E).value
    b = delta0_unstructured(A, E).value
    assert abs(a - c * b) <= 1e-9 * (1 + c * b)


@given(seeds, st.integers(1, 7), st.sampled_from(["unstructured"] + HERM_TAGS
                                                  + ["star-palindromic", "t-palindromic"]))
def test_report_invariants(seed, n, tag):
    p = random_structured(tag, n, seed=seed)
    rep = delta0_structured(p)
    assert rep.value <= upper_bound_trivial(p.A, p.E) + 1e-9
    check_report(rep)


@given(seeds, st.integers(1, 7), st.sampled_from(["*", "T"]))
def test_palindromic_dominates_unstructured(seed, n, star):
    A = crandn(np.random.default_rng(seed), n, n)
    r = delta0_palindromic(A, star)
    assert r.value >= delta0_unstructured(A, star_op(A, star)).value - 1e-9
