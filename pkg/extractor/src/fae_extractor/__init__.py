"""Feature extraction from pretrained audio encoders into FAEF files."""

__version__ = "0.1.0"

from .errors import ExtractionError, FormatError, MissingDependencyError, SpecMismatchError
from .faef import read_faef, read_header, write_faef
from .specs import REGISTRY, EncoderSpec, get_spec

__all__ = [
    "ExtractionError",
    "FormatError",
    "MissingDependencyError",
    "SpecMismatchError",
    "read_faef",
    "read_header",
    "write_faef",
    "REGISTRY",
    "EncoderSpec",
    "get_spec",
    "__version__",
]
