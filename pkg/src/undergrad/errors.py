"""Exception types shared across the package.

The CLI maps these onto process exit codes: configuration problems exit
with 1, numerical failures with 2, and failed verification suites with 3.
"""


class UndergradError(Exception):
    """Base class for all package errors."""


class InvalidInputError(UndergradError):
    """An argument violates a precondition (non-finite, wrong shape, ...)."""


class DomainError(UndergradError):
    """A point lies outside the domain where the operation is defined."""


class NumericalFailureError(UndergradError):
    """An iterative routine diverged, overflowed, or failed to converge."""


class ConfigError(UndergradError):
    """An experiment configuration is malformed or inconsistent."""


class InsufficientDataError(UndergradError):
    """Not enough data points to carry out the requested fit."""
