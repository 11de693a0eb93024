"""Per-command run records for the ``lumbound`` CLI.

A record is assembled from an optional JSON config file and explicit flags,
with flags taking precedence. Every value is checked against the
preconditions of the library call it feeds; problems are collected as
``Issue`` objects so a bad file is reported in one pass.
"""

from __future__ import annotations

import math
from collections.abc import Mapping
from dataclasses import dataclass, field, fields
from typing import Any, ClassVar

from ..core.params import ExtendedParam, LumParams
from ..utils.validation import Issue, check_count, check_fraction, check_positive, has_errors

OUTPUT_FORMATS = ("json", "csv")
# Config-file spellings of field names that are Python keywords.
KEY_ALIASES = {"lambda": "lambda_"}


class ConfigError(ValueError):
    """Raised when a run record has error-level issues."""

    def __init__(self, issues: list[Issue]) -> None:
        self.issues = issues
        super().__init__("; ".join(str(i) for i in issues))


def _coerce(kind: str, value: Any, location: str) -> tuple[Any, Issue | None]:
    if kind == "extended":
        try:
            return ExtendedParam.parse(value), None
        except (TypeError, ValueError) as e:
            return None, Issue("error", str(e), location)
    if kind in ("int", "count"):
        if isinstance(value, float) and value.is_integer():
            value = int(value)
        issue = check_count(value, location, minimum=0 if kind == "int" else 1)
        return value, issue
    if kind in ("positive", "nonneg"):
        if isinstance(value, int) and not isinstance(value, bool):
            value = float(value)
        issue = check_positive(value, location, allow_zero=kind == "nonneg")
        if issue is None and not math.isfinite(value):
            issue = Issue("error", f"must be finite, got {value}", location)
        return value, issue
    if kind == "fraction":
        return value, check_fraction(value, location)
    if kind == "positive_list":
        if not isinstance(value, list | tuple) or not value:
            return value, Issue("error", f"expected a non-empty list of numbers, got {value!r}", location)
        out: list[float] = []
        for k, item in enumerate(value):
            coerced, issue = _coerce("positive", item, f"{location}[{k}]")
            if issue is not None:
                return value, issue
            out.append(coerced)
        return tuple(out), None
    if kind in ("str", "path"):
        if not isinstance(value, str) or (kind == "path" and not value):
            return value, Issue("error", f"expected a string, got {value!r}", location)
        return value, None
    if kind.startswith("choice:"):
        choices = kind.split(":", 1)[1].split("|")
        if value not in choices:
            return value, Issue("error", f"must be one of {', '.join(choices)}, got {value!r}", location)
        return value, None
    raise AssertionError(f"unknown field kind {kind!r}")


@dataclass(slots=True)
class RunConfig:
    """Global settings shared by every command."""

    seed: int = 0
    out: str | None = None
    format: str | None = None

    KINDS: ClassVar[dict[str, str]] = {
        "seed": "int",
        "out": "path",
        "format": "choice:json|csv",
    }
    COMMAND: ClassVar[str] = ""
    DEFAULT_FORMAT: ClassVar[str] = "json"

    @property
    def output_format(self) -> str:
        return self.format or self.DEFAULT_FORMAT

    def validate(self) -> list[Issue]:
        """Cross-field checks, run after every field has been coerced."""
        return []

    @classmethod
    def build(cls, file_values: Mapping[str, Any], overrides: Mapping[str, Any]) -> RunConfig:
        """Merge file values and non-None overrides into a validated record."""
        issues: list[Issue] = []
        merged: dict[str, Any] = dict(file_values)
        merged.update({k: v for k, v in overrides.items() if v is not None})
        names = {f.name for f in fields(cls)}
        values: dict[str, Any] = {}
        for raw_key, raw in merged.items():
            key = KEY_ALIASES.get(raw_key, raw_key)
            location = f"{cls.COMMAND}.{key}"
            if key not in names:
                issues.append(Issue("error", "unknown key", location))
                continue
            if raw is None:
                continue
            value, issue = _coerce(cls.KINDS[key], raw, location)
            if issue is not None:
                issues.append(issue)
            else:
                values[key] = value
        if issues:
            raise ConfigError(issues)
        record = cls(**values)
        issues = record.validate()
        if has_errors(issues):
            raise ConfigError(issues)
        return record


def _params_issue(p: ExtendedParam, q: ExtendedParam, location: str) -> Issue | None:
    try:
        LumParams(p, q)
    except ValueError as e:
        return Issue("error", str(e), location)
    return None


@dataclass(slots=True)
class VerifyConfig(RunConfig):
    """
    Settings for ``lumbound verify``.

    Parameters:
      mode:
        "general" sweeps the (p, q) bound, "noise" the noise-condition bound, "both" runs both.
      p, q:
        When both are given, the general sweep uses this single member; otherwise a
        grid covering every regime is swept.
      trials:
        Trials of the general sweep, assigned round-robin to the swept members.
      atom_min, atom_max:
        Atom count range of the random distributions.
      noise_trials:
        Trials per (tau, c_tau) pair of the noise sweep.
      tau, c_tau:
        Noise exponents and constants swept.
      n_atoms:
        Atoms in each constructed noise distribution.
      workers:
        Threads used for trials.
      trials_csv:
        Optional path receiving one CSV row per trial, in trial order.
    """

    mode: str = "general"
    p: ExtendedParam | None = None
    q: ExtendedParam | None = None
    trials: int = 1000
    atom_min: int = 1
    atom_max: int = 20
    noise_trials: int = 1000
    tau: tuple[float, ...] = (0.5, 1.0, 2.0)
    c_tau: tuple[float, ...] = (0.5, 1.0)
    n_atoms: int = 200
    workers: int = 1
    trials_csv: str | None = None

    KINDS: ClassVar[dict[str, str]] = {
        **RunConfig.KINDS,
        "mode": "choice:general|noise|both",
        "p": "extended",
        "q": "extended",
        "trials": "count",
        "atom_min": "count",
        "atom_max": "count",
        "noise_trials": "count",
        "tau": "positive_list",
        "c_tau": "positive_list",
        "n_atoms": "count",
        "workers": "count",
        "trials_csv": "path",
    }
    COMMAND: ClassVar[str] = "verify"

    def validate(self) -> list[Issue]:
        issues: list[Issue] = []
        if (self.p is None) != (self.q is None):
            issues.append(Issue("error", "p and q must be given together", "verify.p"))
        elif self.p is not None and self.q is not None:
            issue = _params_issue(self.p, self.q, "verify.q")
            if issue is not None:
                issues.append(issue)
        if self.atom_max < self.atom_min:
            issues.append(Issue("error", "atom_max must be >= atom_min", "verify.atom_max"))
        for k, c in enumerate(self.c_tau):
            if c > 1.0:
                issues.append(Issue("error", f"must be <= 1, got {c}", f"verify.c_tau[{k}]"))
        return issues


@dataclass(slots=True)
class TabulateConfig(RunConfig):
    """Settings for ``lumbound tabulate``: an eta grid of ``resolution`` points on [0, 1]."""

    p: ExtendedParam = field(default_factory=lambda: ExtendedParam.finite(1.0))
    q: ExtendedParam = field(default_factory=lambda: ExtendedParam.finite(1.0))
    resolution: int = 101

    KINDS: ClassVar[dict[str, str]] = {
        **RunConfig.KINDS,
        "p": "extended",
        "q": "extended",
        "resolution": "count",
    }
    COMMAND: ClassVar[str] = "tabulate"
    DEFAULT_FORMAT: ClassVar[str] = "csv"

    def validate(self) -> list[Issue]:
        issues: list[Issue] = []
        if self.resolution < 2:
            issues.append(Issue("error", f"must be >= 2, got {self.resolution}", "tabulate.resolution"))
        issue = _params_issue(self.p, self.q, "tabulate.q")
        if issue is not None:
            issues.append(issue)
        return issues


@dataclass(slots=True)
class TrainRunConfig(RunConfig):
    """
    Settings for ``lumbound train``.

    Parameters:
      data:
        Sample set file (.csv or JSON). Without it, two Gaussian clouds are drawn
        from d, n_per_class and separation using the run seed.
      p, q, lambda_, max_iters, grad_tol, initial_step:
        Optimizer settings, see TrainConfig and BacktrackingConfig.
      trace:
        Optional path receiving the per-iteration trace as CSV.
    """

    data: str | None = None
    d: int = 2
    n_per_class: int = 50
    separation: float = 6.0
    p: ExtendedParam = field(default_factory=lambda: ExtendedParam.finite(1.0))
    q: ExtendedParam = field(default_factory=lambda: ExtendedParam.finite(1.0))
    lambda_: float = 1e-4
    max_iters: int = 1000
    grad_tol: float = 1e-6
    initial_step: float = 1.0
    trace: str | None = None

    KINDS: ClassVar[dict[str, str]] = {
        **RunConfig.KINDS,
        "data": "path",
        "d": "count",
        "n_per_class": "count",
        "separation": "nonneg",
        "p": "extended",
        "q": "extended",
        "lambda_": "nonneg",
        "max_iters": "count",
        "grad_tol": "positive",
        "initial_step": "positive",
        "trace": "path",
    }
    COMMAND: ClassVar[str] = "train"

    def validate(self) -> list[Issue]:
        issues: list[Issue] = []
        issue = _params_issue(self.p, self.q, "train.q")
        if issue is not None:
            issues.append(issue)
        if self.data is None and self.n_per_class < 2:
            issues.append(Issue("error", "must be >= 2", "train.n_per_class"))
        return issues


@dataclass(slots=True)
class EvaluateConfig(RunConfig):
    """
    Settings for ``lumbound evaluate``: a saved model against exactly one of a
    distribution file (exact risks) or a sample set file (empirical risk).
    """

    model: str = ""
    dist: str | None = None
    samples: str | None = None
    p: ExtendedParam = field(default_factory=lambda: ExtendedParam.finite(1.0))
    q: ExtendedParam = field(default_factory=lambda: ExtendedParam.finite(1.0))

    KINDS: ClassVar[dict[str, str]] = {
        **RunConfig.KINDS,
        "model": "path",
        "dist": "path",
        "samples": "path",
        "p": "extended",
        "q": "extended",
    }
    COMMAND: ClassVar[str] = "evaluate"

    def validate(self) -> list[Issue]:
        issues: list[Issue] = []
        if not self.model:
            issues.append(Issue("error", "a model file is required", "evaluate.model"))
        if (self.dist is None) == (self.samples is None):
            issues.append(Issue("error", "give exactly one of dist or samples", "evaluate.dist"))
        issue = _params_issue(self.p, self.q, "evaluate.q")
        if issue is not None:
            issues.append(issue)
        return issues


@dataclass(slots=True)
class PilingRunConfig(RunConfig):
    """Settings for ``lumbound piling``; seeds run from the run seed upward."""

    d: int = 500
    n_per_class: int = 25
    separation: float = 2.0
    n_seeds: int = 5
    epsilon_fraction: float = 0.05
    near_hinge_p: float = 1000.0
    lambda_: float = 1.0
    max_iters: int = 50000
    initial_step: float = 1.0

    KINDS: ClassVar[dict[str, str]] = {
        **RunConfig.KINDS,
        "d": "count",
        "n_per_class": "count",
        "separation": "nonneg",
        "n_seeds": "count",
        "epsilon_fraction": "fraction",
        "near_hinge_p": "positive",
        "lambda_": "nonneg",
        "max_iters": "count",
        "initial_step": "positive",
    }
    COMMAND: ClassVar[str] = "piling"

    def validate(self) -> list[Issue]:
        if self.n_per_class < 2:
            return [Issue("error", "must be >= 2", "piling.n_per_class")]
        return []


@dataclass(slots=True)
class SampleConfig(RunConfig):
    """
    Settings for ``lumbound sample``.

    Parameters:
      source:
        "grid" (eta(x) = x on n_atoms grid points), "tsybakov" (tau, c_tau,
        n_atoms) or "file" (dist path).
      n:
        Number of samples drawn.
      emit:
        "samples" writes the SampleSet; "distribution" writes the DiscreteJoint.
    """

    source: str = "grid"
    n: int = 1000
    n_atoms: int = 101
    tau: float = 1.0
    c_tau: float = 1.0
    dist: str | None = None
    emit: str = "samples"

    KINDS: ClassVar[dict[str, str]] = {
        **RunConfig.KINDS,
        "source": "choice:grid|tsybakov|file",
        "n": "count",
        "n_atoms": "count",
        "tau": "positive",
        "c_tau": "positive",
        "dist": "path",
        "emit": "choice:samples|distribution",
    }
    COMMAND: ClassVar[str] = "sample"

    def validate(self) -> list[Issue]:
        issues: list[Issue] = []
        if self.source == "file" and self.dist is None:
            issues.append(Issue("error", "source 'file' needs a dist path", "sample.dist"))
        if self.source == "tsybakov" and self.c_tau > 1.0:
            issues.append(Issue("error", f"must be <= 1, got {self.c_tau}", "sample.c_tau"))
        return issues


COMMAND_CONFIGS: dict[str, type[RunConfig]] = {
    cls.COMMAND: cls
    for cls in (VerifyConfig, TabulateConfig, TrainRunConfig, EvaluateConfig, PilingRunConfig, SampleConfig)
}


def load_run_config(
    command: str, file_values: Mapping[str, Any] | None, overrides: Mapping[str, Any]
) -> RunConfig:
    """
    Build the record for ``command``.

    ``file_values`` may hold the command's keys directly or nest them under the
    command name, e.g. {"verify": {"trials": 100}}.
    """
    cls = COMMAND_CONFIGS[command]
    values: Mapping[str, Any] = file_values or {}
    nested = values.get(command)
    if isinstance(nested, Mapping):
        values = nested
    return cls.build(values, overrides)
