"""Exception types shared across the package."""


class WqedError(Exception):
    """Base class for all package errors."""


class ValidationError(WqedError, ValueError):
    """Bad user input or violated precondition."""


class PoleError(WqedError, ZeroDivisionError):
    """Evaluation exactly on a pole of an analytic expression."""


class InconsistentEnergyError(WqedError):
    """An energy handed to a bound-state routine is not actually outside the band."""


class IntegratorError(WqedError):
    """Time evolution lost norm (or energy) beyond the contracted threshold."""


class NumericalError(WqedError):
    """Internal numerical failure (singular system, root-finder breakdown)."""
