from __future__ import annotations

from typing import Any


class SchemaError(ValueError):
    """Raised when serialized input does not follow the expected schema."""


class InvariantViolation(ValueError):
    """Raised when a quantum object or a behavior breaks one of its invariants.

    Args:
        message:
            Human readable description of the violated invariant.
        max_violation:
            Size of the largest violation that was measured.
    """

    def __init__(self, message: str, max_violation: float) -> None:
        super().__init__(f"{message} (max violation {max_violation:.3e})")
        self.max_violation = max_violation


class EnumerationLimitError(ValueError):
    """Raised when an exhaustive enumeration or an index set would exceed its guard."""


class SolverError(RuntimeError):
    """Raised when the SDP solver stops without meeting its tolerances."""

    def __init__(self, message: str, result: Any = None) -> None:
        super().__init__(message)
        self.result = result
