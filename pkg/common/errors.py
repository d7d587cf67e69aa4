"""Exception hierarchy shared by the numerical packages and the bench CLI."""

from typing import Any, Optional


class ThreeCenterError(Exception):
    """Root of every error raised by this project."""


class PrecisionDomainError(ThreeCenterError, ValueError):
    """Raised when an argument lies outside the domain of an operation."""

    def __init__(self, operation: str, detail: str):
        self.operation = operation
        self.detail = detail
        super().__init__(f"{operation}: {detail}")


class ConvergenceError(ThreeCenterError, ArithmeticError):
    """Raised when a numerical procedure stops before meeting its tolerance.

    Attributes:
        best_estimate: Partial result available when the procedure stopped
            (a ``QuadResult`` for quadrature failures), or None.
    """

    def __init__(self, message: str, best_estimate: Optional[Any] = None):
        self.best_estimate = best_estimate
        super().__init__(message)


class GeometryError(ThreeCenterError, ValueError):
    """Raised for nuclear arrangements the Neumann route cannot handle."""


class DegenerateGeometryError(GeometryError):
    """Raised when the two orbital centers coincide."""


class SingularGeometryError(GeometryError):
    """Raised when the attracting center lies on the closed A-B segment."""

    def __init__(self, xi_c: Any):
        self.xi_c = xi_c
        super().__init__(
            f"center C lies on the segment AB (xi_C = {xi_c}); the second-kind "
            f"Legendre functions diverge there, use a two-center routine instead"
        )


class UnsupportedOrientationError(GeometryError):
    """Raised when m != 0 orbitals would need a rotation to the A->B frame."""


class ConfigError(ThreeCenterError, ValueError):
    """Raised for malformed bench configuration files.

    Attributes:
        path: Configuration file name
        line: 1-based line number of the offending line, or None
    """

    def __init__(self, message: str, path: Optional[str] = None, line: Optional[int] = None):
        self.path = path
        self.line = line
        location = ""
        if path is not None:
            location = f"{path}:{line}: " if line is not None else f"{path}: "
        super().__init__(f"{location}{message}")


class StrategyMismatchError(ThreeCenterError):
    """Raised when Legendre evaluation strategies disagree beyond tolerance."""
