"""Exception types shared across the package."""


class InputError(ValueError):
    """Caller passed arguments that violate an operation's precondition."""


class GraphFormatError(InputError):
    """A graph file could not be parsed.

    ``line`` is the 1-based line number for text files, None for binary ones.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line


class ProtocolError(RuntimeError):
    """A color board slot was published twice."""


class DeadlockSuspected(RuntimeError):
    """A blocking read made no progress within the configured timeout."""

    def __init__(self, vertex, timeout):
        super().__init__(
            f"no progress for {timeout:g}s while waiting on vertex {vertex}"
        )
        self.vertex = vertex
        self.timeout = timeout
