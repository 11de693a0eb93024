from __future__ import annotations

import sys
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, TextIO

# Spellings accepted from config files and flags besides the canonical names.
_LEVEL_ALIASES = {"WARNING": "WARN", "ERR": "ERROR"}


class LogLevel(str, Enum):
    DEBUG = "DEBUG"
    INFO = "INFO"
    WARN = "WARN"
    ERROR = "ERROR"

    @classmethod
    def parse(cls, raw: str | LogLevel) -> LogLevel:
        """Case-insensitive lookup; "warning" maps to WARN."""
        if isinstance(raw, LogLevel):
            return raw
        token = raw.strip().upper()
        try:
            return cls(_LEVEL_ALIASES.get(token, token))
        except ValueError as e:
            raise ValueError(f"unknown log level {raw!r}") from e

    @property
    def rank(self) -> int:
        return _RANKS[self]


_RANKS = {LogLevel.DEBUG: 0, LogLevel.INFO: 1, LogLevel.WARN: 2, LogLevel.ERROR: 3}


@dataclass(slots=True)
class LogConfig:
    """Level, format and sink of the run logger; extra_fields are added to every record."""

    level: LogLevel = LogLevel.INFO
    json: bool = True
    stream: TextIO = field(default_factory=lambda: sys.stderr)
    extra_fields: dict[str, Any] = field(default_factory=dict)
