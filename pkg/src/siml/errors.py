"""Exception types raised by the package."""


class SimlError(Exception):
    """Base class for all package errors."""


class ArgumentError(SimlError, ValueError):
    """An argument is outside the domain of the operation."""


class RefusalError(SimlError, ValueError):
    """The operation is well defined, but not for this kind of input."""


class SimulationError(SimlError, RuntimeError):
    """A model coefficient produced a non-finite value during simulation."""

    def __init__(self, message, step=None):
        super().__init__(message)
        self.step = step


class ParseError(SimlError, ValueError):
    """Malformed input file; ``line`` is 1-based and counts the header."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
