"""Exception hierarchy shared by every qftkit module."""


class QFTError(Exception):
    """Base class for all qftkit errors."""


class DomainError(QFTError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ParameterError(QFTError, ValueError):
    """A parameter combination hits a pole of a normalising Gamma factor."""


class PoleError(QFTError, ValueError):
    """Gamma evaluated at a nonpositive integer."""


class BranchCutError(QFTError, ValueError):
    """Argument lies on a branch cut and no side was requested."""


class BranchPointError(QFTError, ValueError):
    """Argument coincides with a branch point."""


class BranchError(QFTError, ValueError):
    """A principal-branch evaluation disagrees with the analytic continuation."""


class ValidityError(QFTError, ValueError):
    """A truncated series was requested outside its convergence region."""


class NumericalError(QFTError, ArithmeticError):
    """Base for failures where a partial answer may exist.

    ``value`` and ``abs_err`` carry the best estimate reached before giving up
    (``None`` when nothing meaningful is available).
    """

    def __init__(self, message, value=None, abs_err=None):
        super().__init__(message)
        self.value = value
        self.abs_err = abs_err


class AccuracyError(NumericalError):
    """A special-function error estimate exceeds the requested tolerance."""


class ConvergenceError(NumericalError):
    """Quadrature did not reach its tolerance within the evaluation budget."""


class TruncationError(NumericalError):
    """Contour tails could not be pushed below the tolerance."""


class ExtrapolationError(NumericalError):
    """A Richardson ladder failed to settle."""


class FitError(NumericalError):
    """A growth or shape fit failed."""


class BudgetError(NumericalError):
    """A nested series exceeded its term budget."""


class ConsistencyWarning(UserWarning):
    """Two independent evaluations of the same quantity disagree."""
