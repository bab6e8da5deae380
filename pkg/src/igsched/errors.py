"""Exception hierarchy shared by the engine and the CLI.

Each class carries the process exit code the CLI maps it to, so the mapping
lives in one place.
"""

from __future__ import annotations


class IgschedError(Exception):
    """Base class for all engine errors."""

    exit_code = 1


class ConfigError(IgschedError):
    """Invalid configuration, CLI arguments, or input files."""

    exit_code = 2


class ParseError(ConfigError):
    """Malformed weights file, config file, or image file."""


class InputShapeError(ConfigError):
    """Tensor shape incompatible with the model or operation."""


class TargetError(ConfigError):
    """Target class index outside the model's output range."""


class DomainError(ConfigError):
    """Numeric argument outside its documented domain."""


class ConvergenceError(IgschedError):
    """Threshold not reached within the step budget.

    Carries the best (m, delta) pair seen so callers can report how close
    the search came.
    """

    exit_code = 3

    def __init__(self, message: str, best_m: int, best_delta: float):
        super().__init__(message)
        self.best_m = best_m
        self.best_delta = best_delta


class TransportError(IgschedError):
    """Remote endpoint unreachable, closed early, or timed out."""

    exit_code = 4


class ProtocolError(TransportError):
    """Remote endpoint answered with a malformed or invalid message."""


class ProviderError(TransportError):
    """Remote endpoint answered ok=false; carries its error message."""


class MeasurementError(IgschedError):
    """Benchmark produced unusable measurements (e.g. zero total time)."""
