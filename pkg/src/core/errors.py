"""
Exception hierarchy for the decoupling simulator.
"""


class DDSimError(Exception):
    """Base class for all simulator errors."""


class ValidationError(DDSimError, ValueError):
    """A numeric operation was called outside its preconditions."""


class ConfigError(DDSimError):
    """Configuration could not be resolved.

    The message always names the offending dotted key.
    """

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class SimulationError(DDSimError):
    """A runtime invariant of the simulation was violated."""
