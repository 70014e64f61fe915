"""Exception types for the extractor."""


class ExtractionError(RuntimeError):
    """Extraction failed (decode error, shape mismatch, bad output)."""


class SpecMismatchError(ExtractionError):
    """Encoder output disagrees with its published frame rate / dimension."""


class MissingDependencyError(ExtractionError):
    """The encoder's runtime stack or weights are not installed locally.

    The message carries the install / download instructions for the model's
    published repository.
    """


class FormatError(ValueError):
    """Malformed FAEF file. Carries the byte offset of the problem."""

    def __init__(self, message: str, offset: int | None = None):
        super().__init__(message if offset is None else f"offset {offset}: {message}")
        self.offset = offset
