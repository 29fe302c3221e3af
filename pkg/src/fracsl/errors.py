"""Structured exception types shared across the package."""


class FracslError(Exception):
    """Base class for every error this package raises deliberately."""


class ValidationError(FracslError):
    """Invalid problem data, mesh parameters, or configuration input.

    ``field`` names the offending input when known, so callers can report
    errors in machine-readable form.
    """

    def __init__(self, message: str, field: str | None = None):
        super().__init__(message if field is None else f"{field}: {message}")
        self.field = field


class ExprSyntaxError(FracslError):
    """Expression source failed to parse; carries the byte offset."""

    def __init__(self, message: str, offset: int):
        super().__init__(f"{message} (offset {offset})")
        self.offset = offset


class ExprEvalError(FracslError):
    """Expression evaluation hit a domain error (division by zero, sqrt of a
    negative, or a singular power)."""


class OracleError(FracslError):
    """The classical shooting oracle failed to converge."""
