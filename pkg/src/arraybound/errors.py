"""Exception hierarchy shared by every module of the package."""


class ArrayboundError(Exception):
    """Base class for all errors raised by arraybound."""


class ParseError(ArrayboundError):
    """Malformed structure file or formula text.

    Attributes:
        line: 1-based line of the offending token.
        column: 1-based column of the offending token.
    """

    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class ValidationError(ArrayboundError):
    """Well-formed input that violates a structural constraint."""


class UnknownRelation(ValidationError):
    pass


class ArityMismatch(ValidationError):
    pass


class UnboundVariable(ArrayboundError):
    pass


class ResourceLimit(ArrayboundError):
    """A configured search or grid budget was exceeded."""


class NoSuchM(ArrayboundError):
    def __init__(self, m_max):
        super().__init__(f"no m <= {m_max} separates theta from its negation")
        self.m_max = m_max


class InsufficientArrays(ArrayboundError):
    pass


class NotArrayIsolated(ArrayboundError):
    """The array-supporting extension of a type is missing or not unique."""

    def __init__(self, message, count):
        super().__init__(message)
        self.count = count


class BaseOverlap(ValidationError):
    pass


class PreconditionFailure(ArrayboundError):
    pass


class CoverageFailure(ArrayboundError):
    """No chain of conjuncts covers the variable tuple."""
