"""Exception hierarchy and report type shared by all nlv modules."""

from __future__ import annotations

from dataclasses import dataclass, field


class NlvError(Exception):
    """Base class for all domain errors raised by this package."""


class ValidationError(NlvError):
    """An object violates its invariants, or an argument is out of range."""


class ParseError(NlvError):
    """A file or text blob does not conform to its documented schema."""


class DimensionMismatchError(NlvError):
    """Two objects that must share dimensions do not."""


class CapExceededError(NlvError):
    """A requested enumeration or sampling size exceeds the configured cap."""


class DefectTooLargeError(NlvError):
    """An almost-PVM is too far from a genuine PVM to be repaired."""


class MachineHaltedError(NlvError):
    """A halted machine configuration was asked to take another step."""


@dataclass(frozen=True)
class Report:
    """Result of a report-style validation check.

    ``ok`` is True iff no invariant is violated.  ``violations`` holds one
    human-readable line per failed check, naming the offending index.
    ``worst`` is the largest violation magnitude seen (0.0 when clean).
    """

    ok: bool
    violations: tuple[str, ...] = field(default=())
    worst: float = 0.0

    def raise_if_failed(self, what: str) -> None:
        if not self.ok:
            detail = "; ".join(self.violations)
            raise ValidationError(f"invalid {what}: {detail}")
