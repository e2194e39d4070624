"""
Exception types raised by qktdiscord.

Errors that reach the command line carry the exit code the CLI returns for them.
"""

from typing import Any, Optional


class QKTDiscordError(Exception):
    """Base class for all qktdiscord errors."""

    exit_code = 1


class ConfigError(QKTDiscordError, ValueError):
    """A scenario or settings value is missing, unknown or out of range."""

    exit_code = 2

    def __init__(self, message: str, key: Optional[str] = None):
        super().__init__(message if key is None else f"{key}: {message}")
        self.key = key


class NumericalInvariantError(QKTDiscordError):
    """A numerical invariant (unitarity, normalisation, identity) was breached."""

    exit_code = 3

    def __init__(self, invariant: str, residual: float, tolerance: float):
        super().__init__(
            f"Invariant '{invariant}' violated: residual {residual:.3e} exceeds {tolerance:.1e}"
        )
        self.invariant = invariant
        self.residual = residual
        self.tolerance = tolerance


class OutputError(QKTDiscordError):
    """Writing or reading a dataset failed."""

    exit_code = 4

    def __init__(self, path: str, reason: str):
        super().__init__(f"I/O error for {path}: {reason}")
        self.path = path
        self.reason = reason


class PreconditionError(ValueError):
    """An operation was called on input outside its documented domain."""


class TridiagonalNoConvergence(QKTDiscordError, ArithmeticError):
    """
    The tridiagonal QL iteration hit its iteration cap.

    Attributes:
        eigenvalues: The diagonal at the time of failure (partially converged)
        iterations: Number of implicit shifts applied
    """

    exit_code = 3

    def __init__(self, iterations: int, eigenvalues: Any):
        super().__init__(
            f"Tridiagonal eigensolver did not converge after {iterations} iterations"
        )
        self.iterations = iterations
        self.eigenvalues = eigenvalues
