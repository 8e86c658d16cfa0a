"""Exception hierarchy shared by all quiverci modules."""


class QuiverError(Exception):
    """Base class for all quiverci errors."""


class DomainError(QuiverError):
    """An argument violates an operation's precondition or domain."""


class ReductionError(QuiverError):
    """A reduction step was applied where it is not applicable."""


class DecompositionError(QuiverError):
    """A semisimple decomposition failed validation.

    The message names the failed clause (sum-mismatch, no-simple-rep,
    repeated-part-finite-classes, negative-arrow-count).
    """


class ResourceLimitError(QuiverError):
    """An enumeration exceeded its configured cap.

    Caps are hard errors, never silent truncations: a wrong cycle or
    partition count would corrupt every downstream verdict.
    """


class GenerationError(QuiverError):
    """Random-setting generation could not satisfy its constraints."""


class ParseError(QuiverError):
    """A .qv file or decomposition file is malformed."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            message = f"{where}: {message}"
        super().__init__(message)
