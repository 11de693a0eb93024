from __future__ import annotations

from contextvars import ContextVar, Token
from typing import Any

_run_id: ContextVar[str | None] = ContextVar("run_id", default=None)
_command: ContextVar[str | None] = ContextVar("command", default=None)
_regime: ContextVar[str | None] = ContextVar("regime", default=None)
_trial: ContextVar[int | None] = ContextVar("trial", default=None)

_VARS: dict[str, ContextVar[Any]] = {
    "run_id": _run_id,
    "command": _command,
    "regime": _regime,
    "trial": _trial,
}


def set_run_id(run_id: str) -> None:
    _run_id.set(run_id)


def get_run_id() -> str | None:
    return _run_id.get()


def current_fields() -> dict[str, Any]:
    """Context fields currently bound, in a stable order."""
    fields: dict[str, Any] = {}
    for name, var in _VARS.items():
        value = var.get()
        if value is not None:
            fields[name] = value
    return fields


class LogContext:
    def __init__(self, **fields: Any) -> None:
        unknown = set(fields) - set(_VARS)
        if unknown:
            raise ValueError(f"unknown log context fields: {sorted(unknown)}")
        self._fields = fields
        self._tokens: dict[str, Token[Any]] = {}

    def __enter__(self) -> LogContext:
        for name, value in self._fields.items():
            self._tokens[name] = _VARS[name].set(value)
        return self

    def __exit__(self, exc_type: Any, exc_val: Any, exc_tb: Any) -> None:
        for name, token in self._tokens.items():
            _VARS[name].reset(token)
        self._tokens.clear()


def with_context(**fields: Any) -> LogContext:
    return LogContext(**fields)
