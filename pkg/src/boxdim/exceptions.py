"""Exception hierarchy shared by the geometry, counting and CLI layers."""


class BoxDimError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(BoxDimError, ValueError):
    """Malformed input: bad primitive, bad parameter, bad schedule."""


class EmptyInputError(ValidationError):
    pass


class DomainError(BoxDimError, ValueError):
    """Argument outside the domain of a formula (e.g. stage k < 1)."""


class ModeError(BoxDimError, ValueError):
    """Exact arithmetic was requested for a value that is not dyadic."""


class ResourceError(BoxDimError):
    """Requested work exceeds a configured resource cap."""


class InsufficientDataError(BoxDimError, ValueError):
    pass


class NonConvergenceError(BoxDimError, RuntimeError):
    """The ratio iteration hit ``k_max`` before meeting its threshold."""

    def __init__(self, message, k, value, rows=()):
        super().__init__(message)
        self.k = k
        self.value = value
        self.rows = list(rows)


class ParseError(ValidationError):
    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
