"""
errors.py — Exception types raised by the quench-complexity pipeline.
"""


class QuenchError(ValueError):
    """Base class for rejected inputs."""


class ConfigError(QuenchError):
    """Scenario document is missing a key, has a bad type, or is non-physical."""


class ScheduleRangeError(QuenchError):
    """Requested time lies beyond the end of a finite schedule."""


class UnsupportedProtocolError(QuenchError):
    """Operation is only defined for a narrower quench protocol."""


class WindowError(QuenchError):
    """Successive-complexity times fall outside the allowed window."""


class NumericalError(RuntimeError):
    """Base class for failures of a computation on accepted inputs."""


class ConsistencyError(NumericalError):
    """An analytic solution produced a non-positive b² (should be unreachable)."""


class IntegrationInstabilityError(NumericalError):
    """The RK4 oracle drove b to a non-positive value; the step is too large."""
