"""Exception types raised by housebound."""


class HouseboundError(Exception):
    """Base class for all package errors."""


class InputError(HouseboundError, ValueError):
    """Malformed or out-of-contract input."""


class ConvergenceFailure(HouseboundError):
    """Root iteration did not reach the requested certification radius."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class NoSymmetricMatching(HouseboundError):
    """Roots cannot be paired as alpha <-> 1/conj(alpha) within tolerance."""


class IntegralityViolation(HouseboundError):
    """A Dimitrov series coefficient came out non-integral."""


class RootOnCircle(HouseboundError, ValueError):
    """A root lies on (or within certification of) the unit circle."""
