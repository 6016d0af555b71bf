"""Exception types shared across the package."""


class ParameterError(ValueError):
    """Inputs violate a stated precondition (bad prime, exponent out of range, ...)."""


class DivergenceError(ArithmeticError):
    """A series or integral required by the computation does not converge."""

    def __init__(self, message, side=None):
        super().__init__(message)
        self.side = side


class UnsupportedRepresentationError(ValueError):
    """The requested combination cannot be represented exactly."""
