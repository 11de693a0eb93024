"""Validation issues for run configurations.

Validators collect every problem they find instead of stopping at the first
one, so a malformed config file is reported in a single pass.
"""

from __future__ import annotations

import math
from collections.abc import Iterable
from dataclasses import dataclass


@dataclass
class Issue:
    """Validation issue with severity and location context.

    Attributes:
        severity: "error" or "warning" to indicate impact.
        message: Human-readable description of the issue.
        location: Dotted path of the offending field (e.g., "verify.trials").
    """

    severity: str  # "error" | "warning"
    message: str
    location: str

    def is_error(self) -> bool:
        """Return True if this is an error-level issue."""
        return self.severity == "error"

    def is_warning(self) -> bool:
        """Return True if this is a warning-level issue."""
        return self.severity == "warning"

    def __str__(self) -> str:
        return f"{self.severity}: {self.location}: {self.message}"


def has_errors(issues: Iterable[Issue]) -> bool:
    return any(issue.is_error() for issue in issues)


def check_positive(value: float, location: str, allow_zero: bool = False) -> Issue | None:
    if not isinstance(value, int | float) or isinstance(value, bool) or math.isnan(value):
        return Issue("error", f"expected a number, got {value!r}", location)
    if value < 0 or (value == 0 and not allow_zero):
        bound = ">= 0" if allow_zero else "> 0"
        return Issue("error", f"must be {bound}, got {value}", location)
    return None


def check_count(value: int, location: str, minimum: int = 1) -> Issue | None:
    if not isinstance(value, int) or isinstance(value, bool):
        return Issue("error", f"expected an integer, got {value!r}", location)
    if value < minimum:
        return Issue("error", f"must be >= {minimum}, got {value}", location)
    return None


def check_fraction(value: float, location: str) -> Issue | None:
    if not isinstance(value, int | float) or isinstance(value, bool):
        return Issue("error", f"expected a number, got {value!r}", location)
    if not 0.0 < value < 1.0:
        return Issue("error", f"must lie in (0, 1), got {value}", location)
    return None
