"""Exception hierarchy shared across the package.

Every error raised by statescope code derives from :class:`StatescopeError`,
so callers (CLI, HTTP layer, validators) can catch one base class.
"""

from __future__ import annotations


class StatescopeError(Exception):
    """Base class for all statescope errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# --- dataset / file format ---------------------------------------------------

class MissingFile(StatescopeError):
    pass


class ConfigError(StatescopeError):
    """Config file does not parse or has a malformed structure."""


class LengthMismatch(StatescopeError):
    """Aligned series (states, tokens, tracks) disagree on length or shape."""


class NonFiniteValue(StatescopeError):
    """A state file contains NaN or Inf; indicates a broken export."""


class DuplicateSourceId(StatescopeError):
    pass


class IoFailure(StatescopeError):
    pass


class BadMagic(StatescopeError):
    pass


class UnsupportedVersion(StatescopeError):
    """Unknown container version or dtype code."""


class TruncatedFile(StatescopeError):
    pass


class InvalidHeader(StatescopeError):
    """Header fields are structurally impossible (zero dims, reserved bits set)."""


class ParseError(StatescopeError):
    """Text input failed to parse; carries a 1-based (row, col) location."""

    def __init__(self, message: str, row: int, col: int):
        super().__init__(f"{message} (row {row}, col {col})")
        self.row = row
        self.col = col


class CountMismatch(StatescopeError):
    """Number of parsed values disagrees with the declared shape."""


class UnknownToken(StatescopeError):
    """A token in the sequence is not resolvable through the vocabulary."""


class MissingLabel(StatescopeError):
    """A categorical track id has no entry in its label map."""


# --- engine -------------------------------------------------------------------

class RangeOutOfBounds(StatescopeError):
    pass


class EmptySelection(StatescopeError):
    """The selection induced no on states; matching is undefined."""


# --- synthetic corpus ----------------------------------------------------------

class UnbalancedSequence(StatescopeError):
    """Nesting level would leave the allowed [0, 4] band."""


class DTooSmall(StatescopeError):
    """Not enough state dimensions to hold the level indicators."""


# --- analysis -------------------------------------------------------------------

class TooFewVectors(StatescopeError):
    pass
