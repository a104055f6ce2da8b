"""
Exception types. Every error knows the process exit code the CLI reports for it.
"""
from typing import Optional


class ConvexError(Exception):
    """Base class for all errors raised by this package."""
    exit_code: int = 1


class ConfigError(ConvexError):
    """Invalid configuration, body spec or command-line value."""
    exit_code = 2


class InvalidBodyError(ConfigError):
    """A boundary description that is not a closed convex curve."""


class NumericalError(ConvexError):
    """A numerical procedure failed to deliver a trustworthy value."""
    exit_code = 3


class EmptyChordError(NumericalError):
    """The requested depth exceeds the directional width of the body."""

    def __init__(self, theta: float, lam: float, width: float):
        super().__init__(f"depth {lam:.6g} exceeds width {width:.6g} at theta={theta:.6g}")
        self.theta = theta
        self.lam = lam
        self.width = width


class RootFindingError(NumericalError):
    """A bracketed root search could not find a sign change."""


class QuadratureError(NumericalError):
    """Quadrature did not reach the requested tolerance."""

    def __init__(self, message: str, achieved: Optional[float] = None):
        if achieved is not None:
            message = f"{message} (achieved error {achieved:.3g})"
        super().__init__(message)
        self.achieved = achieved


class TableCoverageError(NumericalError):
    """A weight table does not reach the truncation radius that was asked for."""

    def __init__(self, required: float, available: float):
        super().__init__(f"weight table covers rho <= {available:.6g}, "
                         f"truncation radius {required:.6g} required")
        self.required = required
        self.available = available


class WeightTableError(NumericalError):
    """Spot-check validation of a weight table failed."""

    def __init__(self, rho: float, omega: float, table_value: float, direct_value: float):
        rel = abs(table_value - direct_value) / max(abs(direct_value), 1e-300)
        super().__init__(f"worst spot check at rho={rho:.6g}, omega={omega:.6g}: "
                         f"table {table_value:.6g} vs direct {direct_value:.6g} (rel {rel:.3g})")
        self.rho = rho
        self.omega = omega
        self.relative_error = rel


class BudgetExceededError(NumericalError):
    """A generic evaluation would exceed the desk-scale work budget."""


class AcceptanceError(ConvexError):
    """A fitted value fell outside its acceptance gate."""
    exit_code = 4
