"""Structured distances of matrix pencils and polynomials to a common null space,
with backward-error lower bounds on the distance to singularity."""

from .backward import (
    BackwardErrorResult,
    LambdaFamily,
    choose_lambda_family,
    delta_A_lower,
    delta_E_lower,
    delta_lower_bound,
    eta_hermitian,
    eta_palindromic,
    eta_related,
    eta_unstructured,
)
from .dh import DHDistanceKind, dh_delta0, dh_frobenius_norm_of_optimum
from .estimators import (
    DHNullSpaceDistance,
    NullSpaceDistance,
    PolynomialNullSpaceDistance,
    SingularityLowerBound,
)
from .exceptions import PencilDistError
from .model import (
    DHTriple,
    DistanceReport,
    MatrixPolynomial,
    StructuredPencil,
    StructureTag,
    is_regular,
    random_dh_triple,
    random_polynomial,
    random_structured,
    validate,
)
from .nullspace import (
    delta0,
    delta0_A_only,
    delta0_E_only,
    delta0_palindromic,
    delta0_structured,
    delta0_unstructured,
)
from .oracle import sample_null_space_upper_bound, singularity_probe, verify_common_null
from .poly import poly_delta0, poly_delta0_palindromic

__version__ = "0.1.0"
