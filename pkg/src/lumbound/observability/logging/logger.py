from __future__ import annotations

import json
import time
from typing import Any, TextIO

from .config import LogConfig, LogLevel
from .context import current_fields


class Logger:
    """
    One record per line on the configured stream.

    Field precedence, lowest first: fixed fields (ts, level, event, message),
    bound context (run_id, command, regime, trial), configured extra fields,
    and the keyword fields of the call.
    """

    def __init__(self, config: LogConfig) -> None:
        self._config = config

    @property
    def level(self) -> LogLevel:
        return self._config.level

    def is_enabled(self, level: LogLevel) -> bool:
        """False when records at ``level`` would be dropped; lets callers skip costly fields."""
        return level.rank >= self._config.level.rank

    def log(self, level: LogLevel, event: str, message: str, **fields: Any) -> None:
        if not self.is_enabled(level):
            return
        record: dict[str, Any] = {"ts": time.time(), "level": level.value, "event": event, "message": message}
        record.update(current_fields())
        record.update(self._config.extra_fields)
        record.update(fields)
        self._config.stream.write(self._render(record) + "\n")

    def _render(self, record: dict[str, Any]) -> str:
        if self._config.json:
            # default=str covers enums, paths and numpy scalars
            return json.dumps(record, separators=(",", ":"), default=str)
        return " ".join(f"{k}={v}" for k, v in record.items())

    def debug(self, event: str, message: str, **fields: Any) -> None:
        self.log(LogLevel.DEBUG, event, message, **fields)

    def info(self, event: str, message: str, **fields: Any) -> None:
        self.log(LogLevel.INFO, event, message, **fields)

    def warn(self, event: str, message: str, **fields: Any) -> None:
        self.log(LogLevel.WARN, event, message, **fields)

    def error(self, event: str, message: str, **fields: Any) -> None:
        self.log(LogLevel.ERROR, event, message, **fields)


_global_config = LogConfig()
_global_logger = Logger(_global_config)


def get_logger() -> Logger:
    return _global_logger


def configure(
    level: str | LogLevel,
    stream: TextIO | None = None,
    json: bool | None = None,
    extra: dict[str, Any] | None = None,
) -> None:
    """Replace the global logger; unset arguments keep the current format and stream."""
    global _global_config, _global_logger
    _global_config = LogConfig(
        level=LogLevel.parse(level),
        json=_global_config.json if json is None else json,
        stream=stream or _global_config.stream,
        extra_fields=extra or {},
    )
    _global_logger = Logger(_global_config)
