"""Shared exception types."""


class BudgetExceededError(RuntimeError):
    """A configured size or enumeration cap was exceeded."""


class ParseError(ValueError):
    """Malformed input file; carries the offending 1-based line number."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class NotAdmittedError(ValueError):
    """A point set is not a union of orbits of the given group."""
