"""Exception hierarchy shared by every module."""


class HuberbandError(Exception):
    """Base class for all package errors."""


class ConfigError(HuberbandError, ValueError):
    """A configuration value is invalid (bad shape parameter, malformed spec string, ...)."""


class DomainError(HuberbandError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ConstructionError(HuberbandError, RuntimeError):
    """A construction could not be completed (for example, an adversarial pair is infeasible)."""


class InvalidSeparation(ConstructionError):
    """The requested separation r exceeds the largest value for which a construction is valid."""

    def __init__(self, message: str, max_valid_r: float):
        super().__init__(message)
        self.max_valid_r = max_valid_r


class DensityValidationError(ConstructionError):
    """A numerically evaluated density is negative somewhere or does not integrate to one."""
