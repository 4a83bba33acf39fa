import numpy as np
import pytest
from hypothesis import given, strategies as st

from pencildist.exceptions import InvalidStructure
from pencildist.model import (
    DHTriple,
    MatrixPolynomial,
    StructuredPencil,
    StructureTag,
    ensure_valid,
    is_regular,
    random_dh_triple,
    random_polynomial,
    random_structured,
    validate,
)

PENCIL_TAGS = [t for t in StructureTag if t is not StructureTag.DISSIPATIVE_HAMILTONIAN]
POLY_TAGS = PENCIL_TAGS


def test_tag_enumeration_is_closed():
    assert len(StructureTag) == 8
    with pytest.raises(ValueError):
        StructureTag.parse("banana")


@pytest.mark.parametrize("name, tag", [
    ("Hermitian", StructureTag.HERMITIAN),
    ("skew_hermitian", StructureTag.SKEW_HERMITIAN),
    ("SkewHermitian", StructureTag.SKEW_HERMITIAN),
    ("*-even", StructureTag.STAR_EVEN),
    ("*-odd", StructureTag.STAR_ODD),
    ("*-palindromic", StructureTag.STAR_PALINDROMIC),
    ("T-palindromic", StructureTag.T_PALINDROMIC),
    ("dh", StructureTag.DISSIPATIVE_HAMILTONIAN),
])
def test_tag_parse(name, tag):
    assert StructureTag.parse(name) is tag


def test_validate_examples():
    assert validate(StructuredPencil([[0, 1], [1, 0]], np.eye(2), "hermitian")) == []
    v = validate(StructuredPencil([[0, 1], [2, 0]], np.eye(2), "hermitian"))
    assert len(v) == 1 and "A" in v[0]
    R = np.diag([1.0, -0.1])
    v = validate(DHTriple(np.zeros((2, 2)), R, np.eye(2)))
    assert len(v) == 1 and "semidefinite" in v[0]
    with pytest.raises(InvalidStructure):
        ensure_valid(StructuredPencil([[0, 1], [2, 0]], np.eye(2), "hermitian"))


def test_validate_palindromic_and_polynomial():
    A = np.array([[1, 2j], [3, 4]])
    assert validate(StructuredPencil(A, A.conj().T, "star-palindromic")) == []
    assert validate(StructuredPencil(A, A.T, "t-palindromic")) == []
    assert validate(StructuredPencil(A, A.conj().T, "t-palindromic")) != []
    H = np.array([[1, 1j], [-1j, 2]])
    S = 1j * H
    assert validate(MatrixPolynomial([H, S, H], "star-even")) == []
    assert validate(MatrixPolynomial([H, H, H], "star-even")) != []


def test_random_examples():
    assert validate(random_structured("hermitian", 3, seed=4)) == []
    T = random_structured("dissipative-hamiltonian", 4, seed=4)
    assert validate(T) == []
    assert np.allclose(T.J, -T.J.conj().T)
    assert min(np.linalg.eigvalsh(T.R)[0], np.linalg.eigvalsh(T.E)[0]) >= -1e-12
    P1, P2 = random_structured("star-odd", 5, seed=9), random_structured("star-odd", 5, seed=9)
    assert np.array_equal(P1.A, P2.A) and np.array_equal(P1.E, P2.E)


def test_rank_deficient_dh():
    T = random_dh_triple(5, seed=1, rank_R=2, rank_E=3)
    assert np.linalg.matrix_rank(T.R) == 2 and np.linalg.matrix_rank(T.E) == 3
    assert validate(T) == []


def test_is_regular_examples():
    assert is_regular(StructuredPencil(np.eye(2), np.eye(2)))
    v = is_regular(StructuredPencil(np.diag([1.0, 0]), np.zeros((2, 2))))
    assert not v and v.probabilistic and v.certificate is None
    v = is_regular(StructuredPencil(np.diag([1.0, 0]), np.diag([0, 1.0])))
    assert v and v.certificate is not None


def test_polynomial_evaluate():
    P = MatrixPolynomial([np.eye(2), 2 * np.eye(2), 3 * np.eye(2)])
    np.testing.assert_allclose(P.evaluate(2.0), (1 + 4 + 12) * np.eye(2))


@given(st.sampled_from(PENCIL_TAGS + [StructureTag.DISSIPATIVE_HAMILTONIAN]),
       st.integers(1, 8), st.integers(0, 10 ** 6))
def test_generated_pencils_validate(tag, n, seed):
    assert validate(random_structured(tag, n, seed=seed)) == []


@given(st.sampled_from(POLY_TAGS), st.integers(1, 5), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_generated_polynomials_validate(tag, n, m, seed):
    assert validate(random_polynomial(tag, n, m, seed=seed)) == []


@pytest.mark.parametrize("tag", PENCIL_TAGS + [StructureTag.DISSIPATIVE_HAMILTONIAN])
def test_generated_pencils_are_regular(tag):
    fails = sum(not is_regular(random_structured(tag, 1 + s % 8, seed=s)) for s in range(100))
    assert fails == 0
