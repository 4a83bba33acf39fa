import numpy as np
import pytest

from pencildist.backward import choose_lambda_family, eta_unstructured
from pencildist.dh import dh_delta0
from pencildist.model import StructuredPencil, random_dh_triple, random_polynomial, random_structured
from pencildist.nullspace import delta0_structured, delta0_unstructured
from pencildist.oracle import (
    cost_function,
    is_common_null,
    probe_points,
    sample_null_space_upper_bound,
    sample_null_space_witness,
    singularity_probe,
    verify_common_null,
)
from pencildist.poly import poly_delta0

from conftest import crandn

PENCIL_TAGS = ["unstructured", "hermitian", "skew-hermitian", "star-even", "star-odd",
               "star-palindromic", "t-palindromic"]


def test_dense_sampling_unstructured():
    p = random_structured("unstructured", 4, seed=0)
    ub = sample_null_space_upper_bound(p, trials=10 ** 5, seed=0)
    val = delta0_unstructured(p.A, p.E).value
    assert val <= ub + 1e-9 and ub - val <= 1e-3


def test_injected_witness_reproduces_value():
    for tag in PENCIL_TAGS:
        p = random_structured(tag, 4, seed=1)
        rep = delta0_structured(p)
        ub = sample_null_space_upper_bound(p, trials=1, include=[rep.witness], polish=False)
        assert abs(ub - rep.value) <= 1e-10 * (1 + rep.value)


def test_dh_sampled_cost_dominates():
    T = random_dh_triple(3, seed=4, rank_R=2)
    val = dh_delta0(T, "JRE").value
    ub, x = sample_null_space_witness(T, "JRE", trials=10 ** 4, seed=0)
    assert ub >= val - 1e-9 and x is not None


def test_cost_function_strata():
    T = random_dh_triple(3, seed=0)
    assert len(cost_function(T, "JRE")) == 4
    assert len(cost_function(T, "J")) == 1
    assert len(cost_function((np.eye(2), np.eye(2)))) == 1
    with pytest.raises(TypeError):
        cost_function(np.eye(2))


@pytest.mark.parametrize("tag", PENCIL_TAGS)
def test_oracle_dominance_pencils(tag):
    for seed in range(4):
        p = random_structured(tag, 2 + seed, seed=seed)
        val = delta0_structured(p).value
        ub = sample_null_space_upper_bound(p, trials=20_000, seed=seed)
        assert val <= ub + 1e-9 and ub <= 1.05 * val + 1e-12


@pytest.mark.parametrize("tag", ["unstructured", "hermitian", "star-odd"])
def test_oracle_dominance_polynomials(tag):
    P = random_polynomial(tag, 3, 3, seed=2)
    val = poly_delta0(P).value
    ub = sample_null_space_upper_bound(P, trials=20_000, seed=0)
    assert val <= ub + 1e-9 and ub <= 1.05 * val


def test_verify_common_null_examples(rng):
    A = np.diag([1.0, 0.0, 2.0])
    assert verify_common_null([A, 3 * A], [0, 1, 0]) <= 1e-12
    assert is_common_null({"A": A}, [0, 1, 0])
    M = [crandn(rng, 3, 3), crandn(rng, 3, 3)]
    assert verify_common_null(M, crandn(rng, 3)) > 0.1
    assert verify_common_null(M, np.zeros(3)) == np.inf


def test_every_report_passes_verification():
    for tag in PENCIL_TAGS:
        rep = delta0_structured(random_structured(tag, 3, seed=7))
        assert is_common_null(rep.perturbed(), rep.witness)
    rep = dh_delta0(random_dh_triple(3, seed=7), "JRE")
    assert is_common_null(rep.perturbed(), rep.witness)


def test_singularity_probe_examples():
    Z = np.zeros((3, 3))
    assert singularity_probe(Z, Z)[1] == "singular-consistent"
    smax, verdict = singularity_probe(np.eye(3), np.eye(3), seed=2)
    pts = probe_points(np.eye(3), np.eye(3), 4, seed=2)
    assert verdict == "regular" and abs(smax - np.abs(1 + pts).max()) < 1e-12
    with pytest.raises(ValueError):
        singularity_probe(np.eye(3), np.eye(3), grid=2)


def test_common_null_reports_give_singular_pencils():
    # a shared null vector v gives (A' + lam E') v = 0 for every lam
    for tag in PENCIL_TAGS:
        rep = delta0_structured(random_structured(tag, 4, seed=3))
        P = rep.perturbed()
        assert singularity_probe(P["A"], P["E"], grid=12)[1] == "singular-consistent"


def test_eigenvalue_certificate_is_not_singular():
    p = random_structured("unstructured", 3, seed=0)
    lam = choose_lambda_family(p).points[0]
    r = eta_unstructured(p.A, p.E, lam)
    A2, E2 = p.A - r.certificate["A"], p.E - r.certificate["E"]
    assert singularity_probe(A2, E2)[1] == "regular"
