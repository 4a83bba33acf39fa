"""scikit-learn style wrappers around the distance and bound computations.

Each estimator takes its options in ``__init__``, does the work in
``fit(X)`` and exposes results as attributes with a trailing underscore.
``X`` is the object being measured (a pencil, ``(A, E)`` pair, DH triple or
matrix polynomial), not a data matrix.
"""

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .backward import choose_lambda_family, delta_lower_bound, family_from_points
from .dh import dh_delta0
from .model import DHTriple, MatrixPolynomial, StructuredPencil, StructureTag
from .nullspace import delta0_structured
from .poly import poly_delta0, poly_delta0_palindromic


def _pencil(X, structure):
    if isinstance(X, StructuredPencil):
        if structure is None:
            return X
        return StructuredPencil(X.A, X.E, StructureTag.parse(structure))
    if isinstance(X, (tuple, list)) and len(X) == 2:
        return StructuredPencil(X[0], X[1], StructureTag.parse(structure or "unstructured"))
    raise TypeError("X must be a StructuredPencil or an (A, E) pair")


class _ReportMixin:
    def _store(self, report):
        self.report_ = report
        self.value_ = float(report.value)
        self.witness_ = report.witness
        self.perturbations_ = dict(report.perturbations)
        return self


class NullSpaceDistance(_ReportMixin, BaseEstimator):
    """Distance of a pencil to pencils with a common null vector.

    Parameters
    ----------
    structure : str, optional
        Structure tag; defaults to the tag of the fitted pencil.
    rtol : float
        Relative tolerance for the structure check.

    Attributes
    ----------
    value_ : float
    witness_ : ndarray
    perturbations_ : dict
    report_ : DistanceReport
    """

    def __init__(self, structure=None, rtol=1e-10):
        self.structure = structure
        self.rtol = rtol

    def fit(self, X, y=None):
        return self._store(delta0_structured(_pencil(X, self.structure), rtol=self.rtol))


class DHNullSpaceDistance(_ReportMixin, BaseEstimator):
    """Structured distance of a DH triple ``(J, R, E)`` to a common null space."""

    def __init__(self, kind="JRE", starts=32, seed=0):
        self.kind = kind
        self.starts = starts
        self.seed = seed

    def fit(self, X, y=None):
        if isinstance(X, (tuple, list)) and len(X) == 3:
            X = DHTriple(*X)
        if not isinstance(X, DHTriple):
            raise TypeError("X must be a DHTriple or a (J, R, E) triple")
        return self._store(dh_delta0(X, self.kind, starts=self.starts, seed=self.seed))


class PolynomialNullSpaceDistance(_ReportMixin, BaseEstimator):
    """Distance (or certified lower quantity) for a structured matrix polynomial.

    For palindromic tags ``bound_`` is the lower quantity and
    ``equality_certified_`` says whether it is attained; ``value_`` is
    ``nan`` when it is not.
    """

    def __init__(self, structure=None, middle_weighting="half", restarts=8, seed=0):
        self.structure = structure
        self.middle_weighting = middle_weighting
        self.restarts = restarts
        self.seed = seed

    def fit(self, X, y=None):
        if not isinstance(X, MatrixPolynomial):
            X = MatrixPolynomial(list(X), StructureTag.parse(self.structure or "unstructured"))
        elif self.structure is not None:
            X = MatrixPolynomial(X.coeffs, StructureTag.parse(self.structure))
        if X.tag.star is None:
            self._store(poly_delta0(X))
            self.bound_ = self.value_
            self.equality_certified_ = True
            return self
        res = poly_delta0_palindromic(X, restarts=self.restarts, seed=self.seed,
                                      middle_weighting=self.middle_weighting)
        self.result_ = res
        self.bound_ = res.sqrt_bound
        self.equality_certified_ = res.equality_certified
        if res.report is not None:
            self._store(res.report)
        else:
            self.report_, self.value_ = None, np.nan
            self.witness_, self.perturbations_ = None, {}
        return self


class SingularityLowerBound(BaseEstimator):
    """Largest eigenvalue backward error over a family of points.

    Parameters
    ----------
    structure : str, optional
        Defaults to the tag of the fitted pencil.
    lambda_count : int, optional
        Size of the automatically chosen family (default ``n + 1``).
    points : sequence of complex, optional
        Explicit family; overrides ``lambda_count``.
    seed : int

    Attributes
    ----------
    value_ : float
    family_ : LambdaFamily
    per_point_ : list of BackwardErrorResult
    skipped_ : list of (lambda, reason)
    """

    def __init__(self, structure=None, lambda_count=None, points=None, seed=0):
        self.structure = structure
        self.lambda_count = lambda_count
        self.points = points
        self.seed = seed

    def fit(self, X, y=None):
        p = _pencil(X, self.structure)
        if self.points is not None:
            fam = family_from_points(p, self.points)
        else:
            fam = choose_lambda_family(p, self.lambda_count, seed=self.seed)
        res = delta_lower_bound(p, fam, seed=self.seed)
        self.family_ = fam
        self.value_ = res.value
        self.per_point_ = res.per_point
        self.skipped_ = res.skipped
        return self

    def score(self, X, y=None):
        """The fitted bound (``X`` is ignored; present for API compatibility)."""
        check_is_fitted(self, "value_")
        return self.value_


__all__ = [
    "NullSpaceDistance",
    "DHNullSpaceDistance",
    "PolynomialNullSpaceDistance",
    "SingularityLowerBound",
]
