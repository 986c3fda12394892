"""Exception hierarchy.

Validation errors (bad input shapes, unsupported parameter families) and
numerical failures (broken PT phase, unphysical states, non-convergence) are
kept apart so the command line can map them to different exit codes.
"""


class CPTEntangleError(Exception):
    """Base class for all library errors."""


class ValidationError(CPTEntangleError, ValueError):
    pass


class NumericalError(CPTEntangleError, ArithmeticError):
    pass


class DimMismatch(ValidationError):
    pass


class NotHermitian(ValidationError):
    pass


class ZeroVector(ValidationError):
    pass


class BasisNotOrthonormal(ValidationError):
    pass


class NotNormalized(ValidationError):
    pass


class UnsupportedAsymmetric(ValidationError):
    pass


class RankMismatch(ValidationError):
    pass


class DomainError(ValidationError):
    pass


class NoConvergence(NumericalError):
    pass


class NotPositiveDefinite(NumericalError):
    pass


class Overflow(NumericalError):
    pass


class BrokenPTPhase(NumericalError):
    pass


class NonPositiveMetric(NumericalError):
    pass


class UnphysicalState(NumericalError):
    pass


class OptimizerBudgetExceeded(NumericalError):
    """Raised when the optimizer runs out of evaluations.

    The best result found so far is attached as ``best``.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best
