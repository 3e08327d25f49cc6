"""Exception types shared across the package."""

from __future__ import annotations

__all__ = [
    "NormalizationError",
    "PhaseUndefinedError",
    "IntegrationError",
    "ConfigError",
    "EnsembleError",
]


class NormalizationError(ValueError):
    """A state failed its unit-norm invariant."""


class PhaseUndefinedError(ValueError):
    """Phase difference requested at a pole, where it is undefined."""


class IntegrationError(RuntimeError):
    """Integration aborted; carries the failure time and state for diagnosis."""

    def __init__(self, message: str, time: float | None = None, state=None):
        super().__init__(message)
        self.time = time
        self.state = state


class ConfigError(ValueError):
    """Invalid run configuration (bad value, unknown key, malformed file)."""


class EnsembleError(RuntimeError):
    """Too many ensemble realizations failed to integrate."""
