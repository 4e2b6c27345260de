"""Exception hierarchy.

Every error raised on purpose by the library derives from ``IsoprofileError``.
Errors describing an input outside a mathematical domain also derive from
``DomainError`` so the CLI can map them onto a single exit code.
"""

from __future__ import annotations


class IsoprofileError(Exception):
    """Base class for all library errors."""


class DomainError(IsoprofileError, ValueError):
    """Input lies outside the domain where a formula is defined."""


class DomainExceeded(DomainError):
    """Radius beyond the diameter cap of a positively curved model."""


class OutOfRange(DomainError):
    """Volume, parameter or evaluation point outside the admissible range."""


class Singular(DomainError):
    """Evaluation at a focal point, where an s-function vanishes."""


class InfiniteVolume(DomainError):
    """Operation needs a finite total volume."""


class NotDifferentiable(DomainError):
    """One-sided derivatives disagree beyond tolerance."""


class WindowTooSmall(DomainError):
    """Mollification radius too large for the sampling window."""


class NonpositiveBarrier(DomainError):
    """Mean curvature barrier must be strictly positive here."""


class UnsupportedKind(DomainError):
    """Warped product kind without certified symmetric minimizers."""


class InvalidProfile(DomainError):
    """Sampled profile violates its structural invariants."""


class PreconditionUnverified(IsoprofileError):
    """Comparison requested without passing differential-inequality certificates."""


class NoConvergence(IsoprofileError):
    """Iterative solver failed to meet its target."""


class ProfileParseError(IsoprofileError):
    """Malformed profile file; ``line`` is 1-based, or None for whole-file errors."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
