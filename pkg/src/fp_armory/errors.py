"""Exception hierarchy shared by every module.

The CLI maps :class:`UsageError` to exit status 2 and every other
:class:`ArmoryError` to exit status 1.
"""


class ArmoryError(Exception):
    """Base class for all library errors."""


class UsageError(ArmoryError, ValueError):
    """Invalid arguments or violated preconditions."""


class ParseError(UsageError):
    """Malformed textual input; ``position`` is the 0-based offending index."""

    def __init__(self, message, text="", position=0):
        super().__init__(f"{message} at position {position} in {text!r}")
        self.text = text
        self.position = position


class DomainError(ArmoryError, ValueError):
    """Argument outside the mathematical domain of the function."""


class NonTriangleError(DomainError):
    """Side lengths fail the triangle inequality."""


class ZeroDivisorError(ArmoryError, ZeroDivisionError):
    """Interval division by an interval containing zero."""


class DiagnosticError(ArmoryError, RuntimeError):
    """A diagnostic procedure could not reach a conclusion."""
