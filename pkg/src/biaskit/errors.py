"""Exception types shared across the package."""

from __future__ import annotations


class BiasError(Exception):
    """Base class for all package errors."""


class ValidationError(BiasError, ValueError):
    """Input does not describe the claimed structure."""

    def __init__(self, message: str, witness: object = None):
        super().__init__(message)
        self.witness = witness


class ResourceCapError(BiasError):
    """A configured size or search cap would be exceeded."""

    def __init__(self, cap: str, limit: int, needed: int | None = None):
        msg = f"resource cap '{cap}' exceeded (limit {limit}"
        msg += f", needed {needed})" if needed is not None else ")"
        super().__init__(msg)
        self.cap = cap
        self.limit = limit
        self.needed = needed


class InconclusiveError(ResourceCapError):
    """A decision could not be reached inside the resource bound.

    Distinct from a negative verdict: callers must not read it as false.
    """

    def __init__(self, cap: str, limit: int, needed: int | None = None):
        super().__init__(cap, limit, needed)
        self.args = (f"inconclusive: resource bound ({self.args[0]})",)


class TermSyntaxError(ValidationError):
    """Parse failure at a 1-based column."""

    def __init__(self, message: str, column: int):
        super().__init__(f"syntax error at column {column}: {message}")
        self.column = column
