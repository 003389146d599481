from importlib import metadata

from ._errors import EnumerationLimitError
from ._errors import InvariantViolation
from ._errors import SchemaError
from ._errors import SolverError


try:
    __version__ = metadata.version("eacomm")
except metadata.PackageNotFoundError:
    __version__ = "unknown"

__all__ = [
    "__version__",
    "EnumerationLimitError",
    "InvariantViolation",
    "SchemaError",
    "SolverError",
]
