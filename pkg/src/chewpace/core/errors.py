from __future__ import annotations

from pathlib import Path


class ChewPaceError(Exception):
    """Base class for every error raised by chewpace."""


class LocatedError(ChewPaceError, ValueError):
    """Input error that points at a file and, when known, a line in it."""

    def __init__(
        self,
        message: str,
        *,
        path: str | Path | None = None,
        line: int | None = None,
    ) -> None:
        self.path = Path(path) if path is not None else None
        self.line = line
        location = ""
        if self.path is not None:
            location = str(self.path)
            if line is not None:
                location = f"{location}:{line}"
        elif line is not None:
            location = f"line {line}"
        super().__init__(f"{location}: {message}" if location else message)


class InvalidConfigError(ChewPaceError, ValueError):
    pass


class ConfigFileError(LocatedError):
    pass


class OutOfOrderEventError(ChewPaceError, ValueError):
    pass


class EmptyInputError(ChewPaceError, ValueError):
    pass


class OutOfOrderFrameError(ChewPaceError, ValueError):
    pass


class BoundsOutsideBufferError(ChewPaceError, ValueError):
    pass


class WrongClipLengthError(ChewPaceError, ValueError):
    pass


class MissingScoreError(ChewPaceError, KeyError):
    def __str__(self) -> str:
        return str(self.args[0]) if self.args else ""


class InvalidProbabilityError(LocatedError):
    pass


class TimeRegressionError(ChewPaceError, ValueError):
    pass


class PromptLibraryParseError(LocatedError):
    pass


class MissingFamilyCoverageError(ChewPaceError, ValueError):
    pass


class AnnotationParseError(LocatedError):
    pass


class OverlapError(LocatedError):
    pass


class UnknownLabelError(LocatedError):
    pass


class EmptySessionError(ChewPaceError, ValueError):
    pass


class NoSwallowsError(ChewPaceError, ValueError):
    pass


class UnsupportedFormatError(ChewPaceError, ValueError):
    """Raised when audio does not match PCM16 / mono / 16 kHz."""

    def __init__(self, path: str | Path, mismatches: list[str]) -> None:
        self.path = Path(path)
        self.mismatches = list(mismatches)
        detail = "; ".join(mismatches)
        super().__init__(f"{path}: unsupported audio format ({detail})")


class EventLogError(LocatedError):
    pass


class WindowProcessingError(ChewPaceError, RuntimeError):
    """Raised when processing a single analysis window fails."""

    def __init__(self, window_index: int, cause: BaseException) -> None:
        self.window_index = window_index
        super().__init__(
            f"window {window_index}: {type(cause).__name__}: {cause}"
        )
