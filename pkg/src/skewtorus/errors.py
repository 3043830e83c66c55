"""Exception hierarchy shared across the package.

Everything raised on purpose derives from SkewtorusError so the CLI can
map failures to exit codes in one place: configuration and truncation
problems exit 3, property failures exit 2.
"""

from __future__ import annotations


class SkewtorusError(Exception):
    """Base class for all package errors."""


class ConfigurationError(SkewtorusError):
    """Invalid configuration, declaration, or structurally bad input."""


class ParseError(SkewtorusError):
    """Text input rejected; carries the byte offset of the failure."""

    def __init__(self, message: str, offset: int) -> None:
        super().__init__(f"{message} (at offset {offset})")
        self.offset = offset


class TruncationError(SkewtorusError):
    """An angle's denominators do not divide L! at the active level.

    ``required_level`` is the smallest level that would accept the value.
    """

    def __init__(self, message: str, required_level: int) -> None:
        super().__init__(f"{message}; smallest sufficient level is {required_level}")
        self.required_level = required_level


class MembershipError(SkewtorusError):
    """A component tuple violates the group membership conditions."""

    def __init__(self, index: int, message: str) -> None:
        super().__init__(f"component {index}: {message}")
        self.index = index


class RelationError(SkewtorusError):
    """A relation's precondition fails (coset comparisons, predicted forms)."""
