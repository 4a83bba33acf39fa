import numpy as np
import pytest
from scipy.optimize import minimize

from pencildist.backward import (
    LambdaFamily,
    choose_lambda_family,
    delta_A_lower,
    delta_E_lower,
    delta_lower_bound,
    eta,
    eta_hermitian,
    eta_palindromic,
    eta_related,
    eta_unstructured,
    family_from_points,
    hermitian_blocks,
    palindromic_blocks,
    related_to_hermitian,
)
from pencildist.exceptions import FamilyConstructionFailed, LambdaNotAdmissible
from pencildist.model import StructuredPencil, random_structured, star_op
from pencildist.nullspace import delta0_A_only, delta0_structured
from pencildist.optimize import coupled_block, lambda2
from pencildist.oracle import sample_backward_error

from conftest import crandn, rand_herm

nrm = np.linalg.norm


def lmax(H):
    return np.linalg.eigvalsh(H)[-1]


def grid_refine_min(f, r=10.0, k=40):
    g = np.linspace(-r, r, k)
    vals = np.array([[f([a, b]) for b in g] for a in g])
    i, j = np.unravel_index(np.argmin(vals), vals.shape)
    res = minimize(f, [g[i], g[j]], method="Nelder-Mead",
                   options={"xatol": 1e-12, "fatol": 1e-15, "maxiter": 5000})
    return min(res.fun, vals.min())


# -- families -----------------------------------------------------------------

def test_family_identity():
    fam = choose_lambda_family(StructuredPencil(np.eye(2), np.eye(2)), 3)
    assert len(fam) == 3 and fam.min_gap > 1e-8
    assert np.all(np.abs(fam.points + 1) > 1e-6)


def test_family_singular_pencil():
    with pytest.raises(FamilyConstructionFailed):
        choose_lambda_family(StructuredPencil(np.diag([1.0, 0]), np.zeros((2, 2))))


def test_family_margins_and_determinism():
    p = random_structured("unstructured", 5, seed=3)
    fam = choose_lambda_family(p, seed=4)
    for lam, m in zip(fam.points, fam.margins):
        s = np.linalg.svd(p.A + lam * p.E, compute_uv=False)[-1]
        scale = 1 + nrm(p.A, 2) + abs(lam) * nrm(p.E, 2)
        assert s > 1e-10 * scale and abs(m - s / scale) < 1e-12
    assert np.array_equal(fam.points, choose_lambda_family(p, seed=4).points)
    with pytest.raises(ValueError):
        choose_lambda_family(p, count=3)


@pytest.mark.parametrize("tag", ["hermitian", "skew-hermitian", "star-even", "star-odd"])
def test_family_avoids_excluded_axis(tag):
    fam = choose_lambda_family(random_structured(tag, 3, seed=1))
    pts = fam.points if tag in ("hermitian", "skew-hermitian") else -1j * fam.points
    assert np.all(np.abs(pts.imag) > 1e-8)


def test_family_from_points_rejects_duplicates():
    with pytest.raises(LambdaNotAdmissible):
        family_from_points((np.eye(2), np.eye(2)), [1j, 1j])


# -- unstructured -------------------------------------------------------------

def test_unstructured_examples():
    Z = np.zeros((2, 2))
    assert abs(eta_unstructured(np.eye(2), Z, 0).eta - 1) < 1e-14
    assert abs(eta_unstructured(np.eye(2), Z, 2).eta - 1 / np.sqrt(5)) < 1e-14
    with pytest.raises(LambdaNotAdmissible):
        eta_unstructured(np.diag([1.0, 0]), Z, 0.5)


def test_unstructured_certificate(rng):
    for _ in range(10):
        A, E = crandn(rng, 4, 4), crandn(rng, 4, 4)
        lam = complex(*rng.standard_normal(2))
        r = eta_unstructured(A, E, lam)
        assert abs(r.eta - r.info["closed_form"]) <= 1e-9 * (1 + r.eta)
        assert r.certificate_residual(A, E) <= 1e-8
        dA, dE = r.certificate["A"], r.certificate["E"]
        assert abs(np.hypot(nrm(dA, 2), nrm(dE, 2)) - r.eta) <= 1e-10


# -- Hermitian and related ----------------------------------------------------

def test_hermitian_blocks_are_hermitian(rng):
    M = crandn(rng, 3, 3)
    for X in hermitian_blocks(M, 0.3 + 1.1j):
        assert nrm(X - X.conj().T) <= 1e-12 * (1 + nrm(X))


def test_hermitian_grid_oracle():
    A, E, lam = np.diag([1.0, -1]), np.eye(2), 1j
    r = eta_hermitian(A, E, lam)
    M = np.linalg.inv(A + lam * E)
    G, H1, H2 = hermitian_blocks(M, lam)
    best = grid_refine_min(lambda t: lmax(G + t[0] * H1 + t[1] * H2))
    assert abs(1 / r.eta ** 2 - best) <= 1e-6 * best
    assert r.eta >= eta_unstructured(A, E, lam).eta - 1e-9


def test_hermitian_rejects_real_lambda():
    with pytest.raises(LambdaNotAdmissible):
        eta_hermitian(np.eye(2), np.eye(2), 0.5)


@pytest.mark.parametrize("tag", ["hermitian", "skew-hermitian", "star-even", "star-odd",
                                 "star-palindromic"])
def test_backward_error_matches_direct_minimization(tag):
    p = random_structured(tag, 3, seed=11)
    fam = choose_lambda_family(p, seed=2)
    for lam in fam.points[:2]:
        r = eta(p, lam)
        direct = sample_backward_error(p.A, p.E, lam, tag, trials=200, seed=0)
        assert abs(r.eta - direct) <= 1e-7 * (1 + direct)


def test_structured_dominates_unstructured():
    for seed in range(4):
        p = random_structured("hermitian", 4, seed=seed)
        for lam in choose_lambda_family(p, seed=seed).points:
            assert eta_hermitian(p.A, p.E, lam).eta >= eta_unstructured(p.A, p.E, lam).eta - 1e-9


def test_related_examples():
    p = random_structured("skew-hermitian", 3, seed=2)
    lam = 0.4 + 0.9j
    r = eta_related(p.A, p.E, lam, "skew-hermitian")
    assert abs(r.eta - eta_hermitian(1j * p.A, 1j * p.E, lam).eta) <= 1e-12
    q = random_structured("star-even", 3, seed=2)
    r = eta_related(q.A, q.E, 0.7, "star-even")
    assert r.eta > 0 and r.info["hermitian_lambda"] == -0.7j


def test_related_round_trip():
    # applying the skew map twice gives (-A, -E, lam): the same backward error
    p = random_structured("hermitian", 3, seed=5)
    lam = 0.3 - 1.2j
    A1, E1, l1 = related_to_hermitian(p.A, p.E, lam, "skew-hermitian")
    A2, E2, l2 = related_to_hermitian(A1, E1, l1, "skew-hermitian")
    np.testing.assert_allclose(A2, -p.A)
    assert abs(eta_hermitian(A2, E2, l2).eta - eta_hermitian(p.A, p.E, lam).eta) <= 1e-9
    # *-odd rescaling keeps norms: i(A + lam E) = iA + (-i lam)(-E)
    q = random_structured("star-odd", 3, seed=5)
    A3, E3, l3 = related_to_hermitian(q.A, q.E, lam, "star-odd")
    np.testing.assert_allclose(A3 + l3 * E3, 1j * (q.A + lam * q.E))
    assert nrm(A3 - A3.conj().T) < 1e-12 and nrm(E3 - E3.conj().T) < 1e-12


# -- palindromic --------------------------------------------------------------

@pytest.mark.parametrize("star", ["*", "T"])
def test_palindromic_t_zero_consistency(rng, star):
    A = crandn(rng, 3, 3)
    lam = 1.3 * np.exp(0.7j)
    r = eta_palindromic(A, lam, star)
    G, _, _ = palindromic_blocks(A, lam, star)
    bound = 2 / lmax(G) if star == "*" else 2 / lambda2(np.kron(np.eye(2), G))
    assert r.eta ** 2 >= bound - 1e-9


def test_palindromic_identity_grid_oracle():
    A, lam = np.eye(2), 0.5 + 1.0j
    r = eta_palindromic(A, lam, "*")
    G, C, g = palindromic_blocks(A, lam, "*")
    W = np.outer(g, g)
    H1, H2 = W * (C + C.conj().T), 1j * W * (C - C.conj().T)
    best = grid_refine_min(lambda t: lmax(G + t[0] * H1 + t[1] * H2))
    assert abs(2 / r.eta ** 2 - best) <= 1e-6 * best


def test_t_palindromic_tail_probe(rng):
    A = crandn(rng, 3, 3)
    lam = 0.8 * np.exp(2.1j)
    r = eta_palindromic(A, lam, "T")
    G, C, g = palindromic_blocks(A, lam, "T")
    S = np.outer(g, g) * (C + C.T)
    inner = 2 / r.eta ** 2
    for t in (0.0, 1e3 * nrm(G, 2)):
        assert lambda2(coupled_block(G, S, t)) >= inner - 1e-9 * (1 + inner)


def test_t_palindromic_is_bounded_by_direct_minimization_in_some_cases():
    # the formula value and the attained backward error can differ; both must be
    # finite and positive on regular points
    p = random_structured("t-palindromic", 3, seed=2)
    lam = choose_lambda_family(p).points[0]
    formula = eta_palindromic(p.A, lam, "T").eta
    direct = sample_backward_error(p.A, p.E, lam, "t-palindromic", trials=200)
    assert formula > 0 and direct > 0
    assert abs(formula - direct) <= 0.1 * direct


# -- bounds -------------------------------------------------------------------

def test_lower_bound_single_point_and_monotone():
    p = random_structured("hermitian", 3, seed=8)
    fam = choose_lambda_family(p, count=6, seed=1)
    one = delta_lower_bound(p, fam.points[:1])
    assert abs(one.value - eta(p, fam.points[0]).eta) <= 1e-12
    small = delta_lower_bound(p, fam.points[:4])
    big = delta_lower_bound(p, fam)
    assert big.value >= small.value
    assert big.argmax in fam.points


@pytest.mark.parametrize("tag", ["unstructured", "hermitian", "star-palindromic", "t-palindromic"])
def test_lower_bound_below_null_space_distance(tag):
    for seed in range(3):
        p = random_structured(tag, 3, seed=seed)
        lb = delta_lower_bound(p, seed=seed)
        assert lb.value <= delta0_structured(p).value + 1e-8
        assert not lb.skipped


def test_lower_bound_skips_inadmissible_points():
    p = random_structured("hermitian", 2, seed=0)
    res = delta_lower_bound(p, [0.5, 0.5j])
    assert len(res.per_point) == 1 and len(res.skipped) == 1


def test_one_sided_examples():
    Z = np.zeros((2, 2))
    r = delta_A_lower((np.eye(2), Z), [0.0])
    assert abs(r.value - 1) < 1e-12
    p = random_structured("hermitian", 3, seed=1)
    assert delta_E_lower(p).value == np.inf


def test_one_sided_hermitian_chain(rng):
    A = rand_herm(rng, 4)
    B = crandn(rng, 4, 2)
    E = B @ B.conj().T
    p = StructuredPencil(A, E, "hermitian")
    lb = delta_A_lower(p)
    assert lb.value <= delta0_A_only(A, E).value + 1e-8
    un = delta_A_lower(StructuredPencil(A, E), family=choose_lambda_family(p))
    assert lb.value >= un.value - 1e-9


def test_one_sided_E_with_singular_A(rng):
    B = crandn(rng, 4, 2)
    A = B @ B.conj().T
    E = rand_herm(rng, 4)
    p = StructuredPencil(A, E, "hermitian")
    fam = choose_lambda_family(p)
    lb = delta_E_lower(p, fam)
    assert np.isfinite(lb.value) and lb.value > 0
    un = delta_E_lower(StructuredPencil(A, E), fam)
    assert lb.value >= un.value - 1e-9
