import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from pencildist.backward import choose_lambda_family, delta_lower_bound
from pencildist.dh import dh_delta0
from pencildist.estimators import (
    DHNullSpaceDistance,
    NullSpaceDistance,
    PolynomialNullSpaceDistance,
    SingularityLowerBound,
)
from pencildist.model import random_dh_triple, random_polynomial, random_structured
from pencildist.nullspace import delta0_structured
from pencildist.poly import poly_delta0


def test_params_and_clone():
    est = NullSpaceDistance(structure="hermitian", rtol=1e-8)
    assert est.get_params() == {"structure": "hermitian", "rtol": 1e-8}
    c = clone(est).set_params(rtol=1e-6)
    assert c.rtol == 1e-6 and est.rtol == 1e-8


def test_null_space_estimator_matches_function():
    p = random_structured("star-palindromic", 4, seed=2)
    est = NullSpaceDistance()
    assert est.fit(p) is est
    assert est.value_ == delta0_structured(p).value
    assert est.witness_.shape == (4,) and set(est.perturbations_) == {"A", "E"}
    pair = NullSpaceDistance().fit((p.A, p.E))
    # a bare pair is treated as unstructured
    assert pair.value_ <= est.value_ + 1e-12
    with pytest.raises(TypeError):
        NullSpaceDistance().fit(np.eye(2))


def test_dh_estimator():
    T = random_dh_triple(3, seed=0)
    est = DHNullSpaceDistance(kind="JR").fit((T.J, T.R, T.E))
    assert est.value_ == dh_delta0(T, "JR").value


def test_polynomial_estimator():
    P = random_polynomial("hermitian", 3, 2, seed=0)
    est = PolynomialNullSpaceDistance().fit(P)
    assert est.value_ == poly_delta0(P).value and est.equality_certified_
    Q = random_polynomial("star-palindromic", 2, 1, seed=0)
    est = PolynomialNullSpaceDistance().fit(Q)
    assert est.bound_ > 0


def test_lower_bound_estimator():
    p = random_structured("unstructured", 3, seed=4)
    est = SingularityLowerBound(lambda_count=5)
    with pytest.raises(NotFittedError):
        est.score(p)
    est.fit(p)
    ref = delta_lower_bound(p, choose_lambda_family(p, 5))
    assert est.value_ == ref.value == est.score(None)
    assert len(est.family_) == 5
