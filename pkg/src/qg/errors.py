"""Exception types shared across the package.

Every check that can fail numerically carries the offending residual (or the
relevant size) in the message so failures are diagnosable from the text alone.
"""


class QgError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(QgError):
    pass


class ShapeMismatch(QgError):
    pass


class AxiomViolation(QgError):
    pass


class NoInvariantState(QgError):
    pass


class NotPositive(QgError):
    pass


class PentagonFailure(QgError):
    pass


class NotUnitary(QgError):
    pass


class SpanNotClosed(QgError):
    pass


class InconsistentAntipode(QgError):
    pass


class EquivalenceViolation(QgError):
    pass


class MissingConjugationData(QgError):
    pass


class DegenerateUnitCoefficient(QgError):
    pass


class NotASubcategory(QgError):
    pass


class MissingFusionData(QgError):
    pass


class KmsViolation(QgError):
    pass


class SolverDiverged(QgError):
    pass


class CapExceeded(QgError):
    pass


class TruncationTooSmall(QgError):
    pass


class MatchingViolation(QgError):
    pass


class IntertwiningFailure(QgError):
    pass


class BasisTagMissing(QgError):
    pass


class FormatError(QgError):
    """Malformed or unrecognized file content."""


class UnknownFieldError(FormatError):
    pass
