"""Exception types shared across the package."""


class PowerSdeError(Exception):
    """Base class for package errors."""


class ConfigError(PowerSdeError):
    """Invalid configuration file, key, or override."""


class InvalidCoefficientError(PowerSdeError):
    """A coefficient returned a non-finite value for finite input."""

    def __init__(self, message, t=None, x=None):
        super().__init__(message)
        self.t = t
        self.x = x


class HypothesisError(PowerSdeError):
    """A criterion's hypothesis fails, so no prediction can be made."""


class SimulationAbort(PowerSdeError):
    """A trajectory exploded and the experiment policy is to abort."""

    def __init__(self, message, n_flagged=0):
        super().__init__(message)
        self.n_flagged = n_flagged
