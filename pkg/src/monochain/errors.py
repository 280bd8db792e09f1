"""Exception hierarchy shared across the package.

Everything raised on bad inputs or violated operation contracts derives
from MonochainError, so callers (and the CLI) can tell domain errors
apart from programming errors.
"""

from __future__ import annotations


class MonochainError(Exception):
    """Base class for all domain errors raised by this package."""


class ValidationError(MonochainError):
    """Malformed value or violated precondition (bad arity, bad permutation, ...)."""


class StructureParseError(MonochainError):
    """Syntax or consistency error in a structure file."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class FormulaParseError(MonochainError):
    """Syntax, unknown-symbol or arity error in formula source text."""

    def __init__(self, message: str, position: int | None = None):
        self.position = position
        super().__init__(message if position is None else f"offset {position}: {message}")


class SignatureMismatchError(MonochainError):
    """Operation applied across incompatible signatures."""


class CapExceededError(MonochainError):
    """Inputs exceed a configured enumeration or size cap."""


class MixedPatternError(MonochainError):
    """A linear order fails to chain a structure: two tuples share an
    order/equality pattern but disagree on relation membership."""

    def __init__(self, symbol: str, member: tuple, non_member: tuple):
        self.symbol = symbol
        self.member = member
        self.non_member = non_member
        super().__init__(
            f"order does not chain the structure: {symbol}{member} holds but "
            f"{symbol}{non_member} does not, and both tuples have the same pattern"
        )
