"""Shared exception types for the toolchain."""


class CapacityError(Exception):
    """A state allocation or matrix size exceeds the supported limits."""


class ParseError(Exception):
    """Assembly source text violates the grammar."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        self.message = message
        super().__init__(f"line {line}: {message}" if line is not None else message)


class MappingError(Exception):
    """A circuit cannot be adapted to the requested topology."""
