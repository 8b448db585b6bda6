"""
Errors Module
Exception types raised by the engines; each carries the CLI exit code it maps to
"""

from typing import Optional


class OperadForgeError(Exception):
    """Base class for every error raised by operad-forge"""

    exit_code = 1


class InputError(OperadForgeError, ValueError):
    """Malformed user input: terms, presentations, flags, arities"""

    exit_code = 2


class TermParseError(InputError):
    """Term text does not follow the term grammar"""

    def __init__(self, message: str, column: Optional[int] = None):
        self.column = column
        if column is not None:
            message = f"{message} (column {column})"
        super().__init__(message)


class PresentationError(InputError):
    """A presentation failed validation or could not be loaded"""


class NonQuadraticError(PresentationError):
    """The operation needs every relation to have degree 3"""


class ArityError(InputError):
    """A polynomial or monomial list does not live in the expected arity"""


class ColumnLabelMismatch(InputError):
    """Two matrices were compared over different column labelings"""


class ArityCapExceeded(OperadForgeError):
    """Requested arity is above the configured cap and no override was given"""

    exit_code = 3


class VerificationFailed(OperadForgeError):
    """A verification suite reported at least one failing check"""

    exit_code = 4
