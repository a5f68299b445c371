"""Exception hierarchy shared by every module of the package."""


class ValidationError(ValueError):
    """An input violates a documented precondition or type invariant."""


class DomainError(ValidationError):
    """An angle (or other coordinate) lies outside the supported range."""


class QuadratureError(ValidationError):
    """A current distribution cannot be integrated by the composite rule."""


class CalibrationError(ValidationError):
    """The central-direction calibration constant is degenerate."""


class PatternFormatError(ValidationError):
    """A pattern or config file could not be parsed.

    ``line`` carries the 1-based line number when the failure is tied to a
    specific row.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
