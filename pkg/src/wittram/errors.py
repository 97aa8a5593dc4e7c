"""Exception types shared across the package."""

from __future__ import annotations


class WittramError(Exception):
    """Base class for all errors raised by this package."""


class CapError(WittramError, ValueError):
    """A parameter is outside the supported range (prime, length, degree caps)."""


class PrecisionError(WittramError):
    """A result would need digits beyond the provable precision of its inputs."""


class ParamsMismatch(WittramError, ValueError):
    """Two operands live in different rings or have different Witt lengths."""


class NotInDomain(WittramError, ValueError):
    """An operator was applied outside its domain (e.g. Cartier outside Z_1)."""


class WindowOverflow(WittramError, OverflowError):
    """A multivariate form has an exponent outside its ring's truncation window."""
