"""Exception types shared across the package."""

from __future__ import annotations


class EspkitError(Exception):
    """Base class for all package-specific errors."""


class DimensionError(EspkitError, ValueError):
    """Operands have incompatible or non-square shapes."""


class NumericalError(EspkitError, RuntimeError):
    """A numeric routine left its validity envelope (non-convergence, large clip)."""


class WindowError(EspkitError, ValueError):
    """A fitting window is unusable (too few points or ill-conditioned)."""


class ResolutionError(EspkitError, ValueError):
    """A trajectory is sampled too coarsely for the requested detection."""


class GuardViolation(EspkitError, ValueError):
    """A sign-condition precondition of a closed-form expression is not met."""


class ConfigError(EspkitError, ValueError):
    """A run configuration is malformed; the message names the offending field."""
