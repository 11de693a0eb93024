"""Shared helpers: run ids, timestamps, seeding, config validation."""

from __future__ import annotations

from .ids import new_run_id
from .seeding import make_rng, trial_rng
from .time import now_rfc3339, time_block
from .validation import Issue, has_errors

__all__ = [
    "Issue",
    "has_errors",
    "make_rng",
    "new_run_id",
    "now_rfc3339",
    "time_block",
    "trial_rng",
]
