"""Shared exception types."""


class TailsimError(Exception):
    """Base class for all tailsim errors."""


class GimbalLockError(TailsimError):
    """Euler-angle conversion requested too close to |pitch| = 90 deg."""


class NoConvergenceError(TailsimError):
    """Iterative solver exhausted its budget (usually an out-of-envelope input)."""


class DomainError(TailsimError, ValueError):
    """Argument outside the mathematical domain of the operation."""


class NearSingularAttitudeError(TailsimError):
    """Attitude error close to 180 deg; the error-quaternion map M_q is near singular."""


class LowAirspeedError(TailsimError):
    """Dynamic pressure too low for aerodynamic surfaces to be effective."""


class ConfigParseError(TailsimError):
    """Scenario configuration file could not be parsed."""


class ValidationError(TailsimError):
    """Scenario configuration violates a documented invariant."""

    def __init__(self, key: str, reason: str):
        self.key = key
        self.reason = reason
        super().__init__(f"{key}: {reason}")
