"""Exception types shared across the package."""


class ZsnftError(Exception):
    """Base class for all package errors."""


class ConfigurationError(ZsnftError):
    """Invalid grid, method, or study configuration."""


class SignalFileError(ZsnftError):
    """Malformed signal or spectrum file; carries the offending line number."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"{message} (line {line})"
        super().__init__(message)


class StepSingularityError(ZsnftError):
    """A one-step transfer factor degenerated; carries the step index."""

    def __init__(self, message: str, step_index: int):
        self.step_index = step_index
        super().__init__(f"{message} (step {step_index})")


class DegenerateNormError(ZsnftError):
    """Relative-error reference has zero norm on the requested domain."""
