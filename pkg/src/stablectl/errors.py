"""Exception types shared across the package."""

from __future__ import annotations


class StablectlError(Exception):
    """Base class for errors raised by this package."""


class ParseError(StablectlError):
    """Malformed input text; carries the offending line number when known."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        super().__init__(message if line is None else f"line {line}: {message}")


class InvalidInstanceError(StablectlError):
    """An instance violates a structural invariant."""

    def __init__(self, violations):
        self.violations = list(violations)
        super().__init__("; ".join(self.violations))


class InvalidQueryError(StablectlError):
    """A control query is malformed or inconsistent with its instance."""


class CapExceededError(StablectlError):
    """An exhaustive search would exceed the configured size cap."""


class InternalError(StablectlError):
    """A runtime self-check failed; indicates a bug, not bad input."""
