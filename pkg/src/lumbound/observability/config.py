from __future__ import annotations

from dataclasses import dataclass
from typing import TextIO

from .logging import LogLevel
from .logging import configure as configure_logging


@dataclass
class ObservabilityConfig:
    """
    Logging configuration shared by the CLI and the test suite.

    Attributes:
      log_level:
        Minimum log level to emit (DEBUG, INFO, WARN, ERROR).
      log_json:
        Emit logs as compact JSON when True; otherwise use key=value format.
      log_stream:
        Optional IO stream to write logs to (defaults to stderr if None).
    """

    log_level: LogLevel = LogLevel.INFO
    log_json: bool = True
    log_stream: TextIO | None = None


def configure_observability(config: ObservabilityConfig) -> None:
    """Install the global logger described by ``config``."""
    configure_logging(level=config.log_level, stream=config.log_stream, json=config.log_json)


def get_default_config() -> ObservabilityConfig:
    """INFO-level JSON logs to stderr."""
    return ObservabilityConfig()


def get_development_config() -> ObservabilityConfig:
    """DEBUG-level human-readable logs, useful when stepping through a sweep."""
    return ObservabilityConfig(log_level=LogLevel.DEBUG, log_json=False)
