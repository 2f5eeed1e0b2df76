"""Exception types shared across the package."""


class CopulaGraphError(Exception):
    """Base class for all package errors."""


class DomainError(CopulaGraphError, ValueError):
    """A copula parameter lies outside its family's domain."""

    def __init__(self, family, theta, message=None):
        self.family = family
        self.theta = theta
        if message is None:
            message = f"theta out of domain for {family}: {theta!r}"
        super().__init__(message)


class UsageError(CopulaGraphError, ValueError):
    """Invalid arguments or malformed input."""


class DimensionMismatch(CopulaGraphError, ValueError):
    """Latent vectors do not match the graphon's latent dimension."""


class SizeError(CopulaGraphError, ValueError):
    """Graph too small for the requested quantity."""


class UndefinedError(CopulaGraphError, ArithmeticError):
    """A ratio is undefined because its denominator vanishes."""
