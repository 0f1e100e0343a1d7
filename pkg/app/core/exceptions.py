"""Error hierarchy shared by every module; the CLI maps these to exit codes."""
from typing import Optional


class SimulatorError(Exception):
    """Base class for all simulator errors."""

    code = "simulator-error"

    def __init__(self, detail: str):
        super().__init__(detail)
        self.detail = detail


class InvalidParameterError(SimulatorError):
    code = "invalid-parameter"


class ConfigFileError(SimulatorError):
    code = "config-error"


class _LineError(SimulatorError):
    def __init__(self, detail: str, line: Optional[int] = None, source: Optional[str] = None):
        self.line = line
        self.source = source
        where = ""
        if source is not None:
            where = f"{source}"
        if line is not None:
            where = f"{where}:{line}" if where else f"line {line}"
        super().__init__(f"{where}: {detail}" if where else detail)


class MalformedRecordError(_LineError):
    code = "malformed-record"


class TraceParseError(_LineError):
    code = "parse-error"


class InsufficientObjectsError(SimulatorError):
    code = "insufficient-objects"


class UnknownObjectError(SimulatorError):
    code = "unknown-object"


class EmptyEventsError(SimulatorError):
    code = "empty-events"


class ClockUnavailableError(SimulatorError):
    code = "clock-unavailable"


class SweepCaseError(SimulatorError):
    """An error raised while running one (n_objects, rate) case of a sweep."""

    code = "sweep-case"

    def __init__(self, n_objects: int, rate: float, cause: Exception):
        self.n_objects = n_objects
        self.rate = rate
        self.cause = cause
        super().__init__(f"case N={n_objects}, rate={rate:.4f}: {cause}")
