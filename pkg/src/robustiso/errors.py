"""Shared exception types."""


class ParseError(ValueError):
    """Malformed input file. Carries the 1-based line number when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class CapExceededError(RuntimeError):
    """An exact/brute-force routine was asked for more than its size cap."""


class BudgetExceededError(RuntimeError):
    """A bounded-work routine would exceed its work budget."""

    def __init__(self, message, attempted=None):
        super().__init__(message)
        self.attempted = attempted


class VerificationError(RuntimeError):
    """A post-hoc verification of a computed object failed."""
