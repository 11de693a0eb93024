"""Structured logging for lumbound runs."""

from __future__ import annotations

from .config import (
    ObservabilityConfig,
    configure_observability,
    get_default_config,
    get_development_config,
)

__all__ = [
    "ObservabilityConfig",
    "configure_observability",
    "get_default_config",
    "get_development_config",
]
