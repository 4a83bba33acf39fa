"""Exception hierarchy for pencildist."""


class PencilDistError(Exception):
    """Base class for all errors raised by this package."""


class DimensionMismatch(PencilDistError, ValueError):
    pass


class NotSquare(DimensionMismatch):
    pass


class NotHermitian(PencilDistError, ValueError):
    pass


class NotPositiveDefinite(PencilDistError, ValueError):
    pass


class NoConvergence(PencilDistError, RuntimeError):
    pass


class ZeroVector(PencilDistError, ValueError):
    pass


class InfeasibleMapping(PencilDistError, ValueError):
    """No matrix of the requested class maps the given vectors."""


class InvalidStructure(PencilDistError, ValueError):
    """Input matrices violate the invariants of their structure tag.

    The list of violations is available as ``violations``.
    """

    def __init__(self, message, violations=()):
        super().__init__(message)
        self.violations = list(violations)


class UnsupportedTag(PencilDistError, ValueError):
    pass


class NotPalindromic(InvalidStructure):
    pass


class LambdaNotAdmissible(PencilDistError, ValueError):
    pass


class FamilyConstructionFailed(PencilDistError, RuntimeError):
    pass


class Unbounded(PencilDistError, RuntimeError):
    pass


class NoFeasibleStart(PencilDistError, RuntimeError):
    pass


class MissingPerturbations(PencilDistError, ValueError):
    pass


class MalformedInput(PencilDistError, ValueError):
    """Input document does not follow the matrix / pencil JSON layout."""
