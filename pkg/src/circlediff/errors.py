"""Exception types.

Argument errors (bad sizes, out-of-range parameters) are plain ``ValueError``.
Everything that signals leaving a mathematical domain derives from
:class:`DomainError`, which the command line maps to exit code 2.
"""


class CircleDiffError(Exception):
    """Base class for all package errors."""


class DomainError(CircleDiffError, ValueError):
    """A point or function left the domain where an operation is defined."""


class ChartDomainError(DomainError):
    """A value reached the antipodal set ``w = -z`` excluded from the chart."""


class ChartOverflowError(ChartDomainError):
    """A flow state left the chart neighbourhood (``|eta| >= pi``)."""


class NotADiffeomorphismError(DomainError):
    """The lift ``theta + eta(theta)`` is not strictly increasing."""


class PoleError(DomainError):
    """Evaluation at (or numerically on top of) a pole or at zero."""


class OutOfDiscError(DomainError):
    """Argument outside the disc where the slice function is defined."""


class IllConditionedError(CircleDiffError):
    """Newton inversion did not converge."""


class NumericalFailureError(CircleDiffError):
    """NaN or infinity appeared in a computation."""


class UnstableEstimateError(CircleDiffError):
    """Root-test radius estimates disagree across the coefficient tail."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
