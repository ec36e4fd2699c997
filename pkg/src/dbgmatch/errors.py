class DbgError(Exception):
    """Base class for every error raised by this package."""


class AlphabetRangeError(DbgError, ValueError):
    pass


class UnknownVertex(DbgError, KeyError):
    pass


class InvariantViolation(DbgError, ValueError):
    pass


class NoIncomingWalk(DbgError):
    def __init__(self, vertex: int, k: int):
        super().__init__(f"vertex {vertex} has no incoming walk of length {k - 1}")
        self.vertex = vertex


class AmbiguousImplicitLabel(DbgError):
    """Two walks of length k-1 ending at the same vertex spell different strings."""

    def __init__(self, vertex: int, walks: tuple[list[int], list[int]]):
        super().__init__(f"vertex {vertex}: walks {walks[0]} and {walks[1]} disagree")
        self.vertex = vertex
        self.walks = walks


class CapExceeded(DbgError):
    pass


class NotPowerOfTwo(DbgError, ValueError):
    pass


class ParseError(DbgError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.column = column
