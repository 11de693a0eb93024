"""Time helpers for run metadata and coarse timing of sweeps."""

from __future__ import annotations

import time
from collections.abc import Generator
from contextlib import contextmanager
from dataclasses import dataclass
from datetime import UTC, datetime


def now_rfc3339() -> str:
    """Return the current UTC time as an RFC3339-formatted string.

    Returns:
        str: RFC3339 timestamp (e.g., "2024-01-15T10:30:45.123456Z").
    """
    return datetime.now(UTC).isoformat().replace("+00:00", "Z")


@dataclass(slots=True)
class Elapsed:
    """Mutable holder filled in when a ``time_block`` exits."""

    seconds: float = 0.0


@contextmanager
def time_block() -> Generator[Elapsed, None, None]:
    """Measure the wall time of a block using a monotonic clock.

    Example:
        with time_block() as elapsed:
            run_sweep()
        logger.info("sweep.done", "finished", seconds=elapsed.seconds)
    """
    holder = Elapsed()
    start = time.monotonic()
    try:
        yield holder
    finally:
        holder.seconds = time.monotonic() - start
