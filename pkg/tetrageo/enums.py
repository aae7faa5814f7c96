from enum import Enum, IntEnum


class StartFamily(str, Enum):
    """Tiling edge family the trace starts on."""

    HORIZONTAL = "HORIZONTAL"  # A1A2 / A3A4 rows
    RISING = "RISING"  # A1A3 / A2A4
    FALLING = "FALLING"  # A1A4 / A2A3


class BoundClass(str, Enum):
    CATCH = "CATCH"
    CROSS = "CROSS"
    SHORT = "SHORT"


class OutputFormat(str, Enum):
    TABLE = "table"
    JSON = "json"
    CSV = "csv"
    SVG = "svg"


class Projection(str, Enum):
    POINCARE = "poincare"
    KLEIN = "klein"


class Command(str, Enum):
    INFO = "info"
    BUILD = "build"
    COUNT = "count"
    ORACLE = "oracle"
    EXPORT_TETRA = "export-tetra"


class ExitCode(IntEnum):
    OK = 0
    VALIDATION_ERROR = 2
    INVARIANT_FAILURE = 3
