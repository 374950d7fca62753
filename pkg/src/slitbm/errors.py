"""Exception types shared across the package."""


class DomainError(ValueError):
    """Argument outside the set where a formula is defined."""


class SingularityError(DomainError):
    """Evaluation requested exactly at a kernel singularity."""


class RangeError(OverflowError):
    """Argument beyond the supported numerical range."""


class ConsistencyError(ArithmeticError):
    """A computed quantity violates a structural bound (e.g. a negative density)."""


class ToleranceError(ArithmeticError):
    """Quadrature did not reach the requested tolerance.

    The best available estimate and its error bound are kept on the exception.
    """

    def __init__(self, message, estimate, error):
        super().__init__(f"{message} (estimate={estimate!r}, error={error!r})")
        self.estimate = estimate
        self.error = error


class DivergenceError(ArithmeticError):
    """An improper integral does not appear to converge."""
