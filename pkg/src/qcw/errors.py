"""Shared exception types."""


class QcwError(Exception):
    """Base class for all workbench errors."""


class ParseError(QcwError):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{message} (line {line}, column {col})")
        self.line = line
        self.col = col


class SizeLimitError(QcwError):
    """A requested computation exceeds the configured order bound."""


class DimensionMismatchError(QcwError):
    """Operands live in different groups / moduli / dimensions."""


class NotAHomomorphismError(QcwError):
    """A map that was required to be a homomorphism is not one."""


class UnsupportedFieldError(QcwError):
    """Field descriptor outside the supported finite/local/real families."""
