"""Custom exceptions used across the hds-fallcast package.

The hierarchy lets callers (and the CLI) react to a category of failure
instead of a builtin: configuration problems, data problems, and numeric
problems each map to their own exit code. Every exception stores a
human-readable ``message``, an optional ``error_code`` and a ``details``
mapping for diagnostic output.

Example:
    raise HdsFallcastDataError("Malformed row", error_code="malformed-row", details={"line": 7})

License: MIT

Copyright (c) 2025 Jim Schilling
"""

from typing import Any

from splurge_exceptions import SplurgeFrameworkError


class HdsFallcastError(SplurgeFrameworkError):
    """Base exception for all hds-fallcast errors."""

    _domain = "hds-fallcast"

    #: Process exit code the CLI uses for this category.
    exit_code = 1

    def __reduce__(self) -> tuple[Any, ...]:
        # the base reducer hands error_code to the message parameter
        cls, _, state = super().__reduce__()
        return (cls, (self.message, self.error_code, self.details), state)


class HdsFallcastConfigError(HdsFallcastError):
    """Raised when a configuration value or hyperparameter is invalid.

    Covers unknown configuration keys, schema version mismatches and
    out-of-range settings on any of the frozen configuration dataclasses.
    """

    _domain = "hds-fallcast.config"
    exit_code = 1


class HdsFallcastDataError(HdsFallcastError):
    """Raised when input data cannot be used.

    Malformed CSV rows, datasets failing validation, single-class inputs
    to models that need both classes, and classes too small for fold
    construction all land here.
    """

    _domain = "hds-fallcast.data"
    exit_code = 2


class HdsFallcastOSError(HdsFallcastDataError):
    """Raised for operating system errors while reading or writing artifacts."""

    _domain = "hds-fallcast.os"


class HdsFallcastNumericError(HdsFallcastError):
    """Raised when a computation produces non-finite values.

    ``details`` names where it happened (time step, epoch or parameter).
    """

    _domain = "hds-fallcast.numeric"
    exit_code = 3


class HdsFallcastValueError(HdsFallcastError):
    """Raised when an argument has the right type but an unusable value."""

    _domain = "hds-fallcast.value"


class HdsFallcastTypeError(HdsFallcastError):
    """Raised when an argument is of an inappropriate type."""

    _domain = "hds-fallcast.type"
