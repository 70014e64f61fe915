"""Shared exception types for the msa_probe package."""


class ValidationError(ValueError):
    """An input violates a documented precondition or invariant."""


class ParseError(ValidationError):
    """Malformed annotation text. Carries the offending 1-based line number."""

    def __init__(self, message: str, line: int | None = None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


class FormatError(ValidationError):
    """Malformed binary feature file. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"offset {offset}: {message}")
        self.offset = offset
