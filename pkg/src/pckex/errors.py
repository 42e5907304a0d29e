"""Exception types shared across the toolkit.

Class names double as the stable error names surfaced by the CLI, so
they deliberately omit the usual ``Error`` suffix.
"""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit errors."""

    @property
    def name(self) -> str:
        return type(self).__name__


class NotPrime(ToolkitError):
    pass


class RangeViolation(ToolkitError):
    pass


class WidthOverflow(ToolkitError):
    pass


class IndexOutOfRange(ToolkitError):
    pass


class ParamMismatch(ToolkitError):
    pass


class TooLarge(ToolkitError):
    pass


class CentralElement(ToolkitError):
    pass


class NotApplicable(ToolkitError):
    pass


class Degenerate(ToolkitError):
    pass


class NotHomomorphism(ToolkitError):
    pass


class NotAutomorphism(ToolkitError):
    pass


class NoWitness(ToolkitError):
    pass


class InvariantViolation(ToolkitError):
    pass


class FrameTooLarge(ToolkitError):
    pass


class Truncated(ToolkitError):
    pass


class BadJson(ToolkitError):
    pass


class BadVersion(ToolkitError):
    pass


class DigestMismatch(ToolkitError):
    pass


class Timeout(ToolkitError):
    pass
