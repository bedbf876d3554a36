"""Exception hierarchy shared across the package.

Errors that can surface per sweep point carry a short machine-readable
``code`` (e.g. ``"nu3_below_one"``) used for the status column of tabular
output.
"""


class ConfigError(ValueError):
    """A configuration document is malformed or inconsistent."""


class DomainError(ValueError):
    """An input lies outside the mathematical domain of an operation."""

    def __init__(self, message: str, code: str = "domain_error") -> None:
        super().__init__(message)
        self.code = code


class UnphysicalStateError(DomainError):
    """A covariance matrix violates the physicality bound (symplectic eigenvalue < 1)."""

    def __init__(self, message: str, code: str = "nu_below_one") -> None:
        super().__init__(message, code=code)


class TruncationError(RuntimeError):
    """A truncated series or summation window left too much probability mass outside."""


class QuadratureError(RuntimeError):
    """Numerical quadrature failed to converge to the requested tolerance."""
