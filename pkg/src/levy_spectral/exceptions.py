"""Exception types raised by the library."""


class LevySpectralError(Exception):
    """Base class for all library errors."""


class DomainError(LevySpectralError, ValueError):
    """An argument lies outside the domain of a function."""


class CapabilityError(LevySpectralError, NotImplementedError):
    """The requested evaluation is not available for this exponent family."""


class AssumptionError(LevySpectralError):
    """A structural hypothesis on the exponent is violated."""


class PositivityError(LevySpectralError):
    """A quantity that must be nonnegative came out negative beyond tolerance."""


class AccuracyError(LevySpectralError, ArithmeticError):
    """Numerical integration did not reach the requested accuracy.

    The best available estimate and its error bound are kept on the
    exception so that callers can decide whether to accept them.
    """

    def __init__(self, message, estimate=None, error=None):
        super().__init__(message)
        self.estimate = estimate
        self.error = error
