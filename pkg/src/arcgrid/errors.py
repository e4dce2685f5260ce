"""Exception types shared across the package."""


class ArcGridError(Exception):
    """Base class for all arcgrid errors."""


class MalformedTask(ArcGridError):
    """A task file or document violates the task schema or grid bounds."""

    def __init__(self, message: str, *, path: str | None = None):
        self.path = path
        if path is not None:
            message = f"{path}: {message}"
        super().__init__(message)


class NoMatchingTask(ArcGridError):
    """No task satisfies the requested filter."""


class EmptyTask(ArcGridError):
    """The task lacks the pairs required to start an episode."""


class EpisodeOver(ArcGridError):
    """step() was called after the episode terminated or truncated."""


class IllegalOp(ArcGridError):
    """The operation id is unknown or not allowed by the active preset."""


class InvalidSchedule(ArcGridError):
    """A curriculum phase schedule is malformed."""


class MalformedRecord(ArcGridError):
    """A trace line could not be parsed into a TraceRecord."""

    def __init__(self, message: str, *, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ReplayDivergence(ArcGridError):
    """Replaying a trace produced a state digest that does not match."""

    def __init__(self, message: str, *, index: int | None = None):
        self.index = index
        super().__init__(message)
