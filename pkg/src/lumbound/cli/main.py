#!/usr/bin/env python3
"""lumbound command-line interface.

Commands:
  verify     randomized sweeps of the comparison bounds
  tabulate   f_P, minimal risk, g, g' and the lower bound of g over an eta grid
  train      fit a linear LUM machine
  evaluate   risks of a saved model on a distribution or a sample set
  piling     DWD versus near-hinge data piling on HDLSS Gaussians
  sample     draw a sample set from a distribution (or emit the distribution)

Exit codes: 0 success, 1 bound violation or failed run, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import sys
from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, TextIO

import numpy as np

from ..core.distributions import (
    DiscreteJoint,
    SampleSet,
    make_grid_distribution,
    make_hdlss_gaussians,
    make_tsybakov_distribution,
    sample_from,
)
from ..core.params import LumParams
from ..core.pointwise import excess_at_zero, excess_derivative, excess_lower_bound, minimal_risk, minimizer
from ..core.risk import risk_report
from ..io.codec import (
    CodecError,
    CsvRowWriter,
    csv_text,
    discrete_joint_rows,
    discrete_joint_to_json,
    dumps_document,
    load_json,
    read_discrete_joint,
    read_sample_set,
    sample_set_rows,
    sample_set_to_json,
)
from ..observability import ObservabilityConfig, configure_observability
from ..observability.logging import LogLevel, get_logger, set_run_id, with_context
from ..training.config import BacktrackingConfig, TrainConfig
from ..training.model import LinearModel, predict
from ..training.piling import PilingConfig, compare_piling
from ..training.trainer import TrainingError, empirical_risk, fit
from ..utils.ids import new_run_id
from ..verification.bounds import comparison_bound
from ..verification.verifier import (
    NoiseConditionError,
    NoiseSweepConfig,
    SweepConfig,
    TrialRecord,
    VerificationError,
    noise_trial_sweep,
    random_trial_sweep,
    verify_comparison,
)
from .config import (
    ConfigError,
    EvaluateConfig,
    PilingRunConfig,
    RunConfig,
    SampleConfig,
    TabulateConfig,
    TrainRunConfig,
    VerifyConfig,
    load_run_config,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

# One member per regime, with several p and q values.
DEFAULT_VERIFY_GRID: tuple[LumParams, ...] = (
    *(LumParams.of(p, 1.0) for p in (0.1, 0.5, 1.0, 2.0, 10.0)),
    *(LumParams.of(0.0, q) for q in (0.5, 1.0, 2.0, "inf")),
    LumParams.hinge(),
)

TRIAL_COLUMNS = ["index", "label", "generator", "n_atoms", "lhs", "rhs", "slack"]
SWEEP_COLUMNS = ["sweep", "trials", "violations", "min_slack", "max_ratio", "seed"]
TABULATE_COLUMNS = ["eta", "a", "f_p", "minimal_risk", "g", "g_prime", "lower_bound"]
TRACE_COLUMNS = ["iter", "objective", "grad_norm"]
PILING_COLUMNS = ["seed", "smooth_score", "near_hinge_score", "smooth_converged", "near_hinge_converged"]


@dataclass(slots=True)
class CommandResult:
    """What a command produced: a JSON payload, its CSV form, and an exit code."""

    payload: dict[str, Any]
    csv_columns: list[str] = field(default_factory=list)
    csv_rows: list[dict[str, Any]] = field(default_factory=list)
    exit_code: int = EXIT_OK


def _trial_writer(writer: CsvRowWriter) -> Callable[[TrialRecord], None]:
    def on_trial(record: TrialRecord) -> None:
        writer.write(record.to_row())

    return on_trial


def cmd_verify(cfg: VerifyConfig) -> CommandResult:
    logger = get_logger()
    payload: dict[str, Any] = {"mode": cfg.mode}
    rows: list[dict[str, Any]] = []
    failed = False
    trial_stream: TextIO | None = None
    on_trial: Callable[[TrialRecord], None] | None = None
    if cfg.trials_csv is not None:
        trial_stream = Path(cfg.trials_csv).open("w", encoding="utf-8", newline="")
        on_trial = _trial_writer(CsvRowWriter(trial_stream, TRIAL_COLUMNS))

    try:
        if cfg.mode in ("general", "both"):
            if cfg.p is not None and cfg.q is not None:
                params_list = [LumParams(cfg.p, cfg.q)]
            else:
                params_list = list(DEFAULT_VERIFY_GRID)
            sweep = SweepConfig(
                n_trials=cfg.trials,
                atom_range=(cfg.atom_min, cfg.atom_max),
                params_list=params_list,
                workers=cfg.workers,
            )
            with with_context(regime="general"):
                report = random_trial_sweep(sweep, cfg.seed, on_trial)
            payload["general"] = report.to_json()
            rows.append({"sweep": "general", **report.to_json()})
            failed = failed or not report.passed
        if cfg.mode in ("noise", "both"):
            noise = NoiseSweepConfig(
                trials_per_pair=cfg.noise_trials,
                tau_list=cfg.tau,
                c_tau_list=cfg.c_tau,
                q_list=(cfg.q,) if cfg.q is not None else NoiseSweepConfig().q_list,
                n_atoms=cfg.n_atoms,
                workers=cfg.workers,
            )
            with with_context(regime="tsybakov"):
                report = noise_trial_sweep(noise, cfg.seed, on_trial)
            payload["noise"] = report.to_json()
            rows.append({"sweep": "noise", **report.to_json()})
            failed = failed or not report.passed
    finally:
        if trial_stream is not None:
            trial_stream.close()

    if failed:
        logger.error("cli.violations", "comparison bound violated", mode=cfg.mode)
    return CommandResult(payload, SWEEP_COLUMNS, rows, EXIT_FAILURE if failed else EXIT_OK)


def cmd_tabulate(cfg: TabulateConfig) -> CommandResult:
    params = LumParams(cfg.p, cfg.q)
    eta = np.arange(cfg.resolution, dtype=np.float64) / (cfg.resolution - 1)
    a = np.abs(2.0 * eta - 1.0)
    interior = a < 1.0
    f_p = np.asarray(minimizer(params, eta))
    risk = np.asarray(minimal_risk(params, eta))
    g = np.asarray(excess_at_zero(params, a))
    g_prime = np.full_like(a, np.inf)
    g_prime[interior] = np.asarray(excess_derivative(params, a[interior]))
    if params.is_hinge:
        lower = np.full_like(a, np.nan)
    else:
        lower = np.asarray(excess_lower_bound(params, a))
    rows = [
        dict(zip(TABULATE_COLUMNS, map(float, values), strict=True))
        for values in zip(eta, a, f_p, risk, g, g_prime, lower, strict=True)
    ]
    payload = {"params": params.to_json(), "regime": params.regime.value, "rows": rows}
    return CommandResult(payload, TABULATE_COLUMNS, rows)


def _training_data(cfg: TrainRunConfig) -> SampleSet:
    if cfg.data is not None:
        return read_sample_set(cfg.data)
    return make_hdlss_gaussians(cfg.d, cfg.n_per_class, cfg.separation, cfg.seed)


def cmd_train(cfg: TrainRunConfig) -> CommandResult:
    data = _training_data(cfg)
    config = TrainConfig(
        params=LumParams(cfg.p, cfg.q),
        lambda_=cfg.lambda_,
        max_iters=cfg.max_iters,
        grad_tol=cfg.grad_tol,
        step_rule=BacktrackingConfig(initial_step=cfg.initial_step),
        seed=cfg.seed,
    )
    model, trace = fit(data, config)
    _, labels = predict(model, data.features)
    training_error = float(np.mean(labels != data.labels))
    if cfg.trace is not None:
        Path(cfg.trace).write_text(csv_text(trace.rows(), TRACE_COLUMNS), encoding="utf-8")
    payload = {
        "model": model.to_json(),
        "params": config.params.to_json(),
        "lambda": config.lambda_,
        "seed": cfg.seed,
        "iterations": trace.iterations_used,
        "converged": trace.converged,
        "objective": trace.objective_history[-1],
        "grad_norm": trace.grad_norm_history[-1],
        "training_error": training_error,
    }
    return CommandResult(payload, TRACE_COLUMNS, trace.rows())


def _load_model(path: str) -> LinearModel:
    """Accept a bare model record or the document written by ``train``."""
    raw = load_json(path)
    nested = raw.get("model")
    return LinearModel.from_json(nested if isinstance(nested, dict) else raw)


def cmd_evaluate(cfg: EvaluateConfig) -> CommandResult:
    params = LumParams(cfg.p, cfg.q)
    model = _load_model(cfg.model)
    if cfg.dist is not None:
        dist = read_discrete_joint(cfg.dist)
        score = model.as_score()
        report = risk_report(dist, score, params)
        check = verify_comparison(dist, score, params)
        payload: dict[str, Any] = {
            "params": params.to_json(),
            "risk": report.to_json(),
            "bound": comparison_bound(params).to_json(),
            "lhs": check.lhs,
            "rhs": check.rhs,
            "slack": check.slack,
        }
        row = {**report.to_json(), "slack": check.slack}
    else:
        data = read_sample_set(cfg.samples or "")
        empirical = empirical_risk(model, data, params)
        payload = {"params": params.to_json(), "empirical": empirical.to_json()}
        row = empirical.to_json()
    return CommandResult(payload, list(row), [row])


def cmd_piling(cfg: PilingRunConfig) -> CommandResult:
    config = PilingConfig(
        d=cfg.d,
        n_per_class=cfg.n_per_class,
        mean_separation=cfg.separation,
        base_seed=cfg.seed,
        n_seeds=cfg.n_seeds,
        epsilon_fraction=cfg.epsilon_fraction,
        near_hinge=LumParams.of(cfg.near_hinge_p, 1.0),
        train=TrainConfig(
            lambda_=cfg.lambda_,
            max_iters=cfg.max_iters,
            grad_tol=1e-6,
            step_rule=BacktrackingConfig(initial_step=cfg.initial_step),
            accelerated=True,
        ),
    )
    comparison = compare_piling(config)
    payload = {
        "smooth": config.smooth.to_json(),
        "near_hinge": config.near_hinge.to_json(),
        **comparison.to_json(),
    }
    rows = [r.to_json() for r in comparison.runs]
    return CommandResult(payload, PILING_COLUMNS, rows)


def _sample_source(cfg: SampleConfig) -> DiscreteJoint:
    if cfg.source == "tsybakov":
        return make_tsybakov_distribution(cfg.tau, cfg.c_tau, cfg.n_atoms)
    if cfg.source == "file":
        return read_discrete_joint(cfg.dist or "")
    return make_grid_distribution(cfg.n_atoms, lambda x: x)


def cmd_sample(cfg: SampleConfig) -> CommandResult:
    dist = _sample_source(cfg)
    if cfg.emit == "distribution":
        columns, rows = discrete_joint_rows(dist)
        return CommandResult({"distribution": discrete_joint_to_json(dist)}, columns, rows)
    data = sample_from(dist, cfg.n, cfg.seed)
    columns, rows = sample_set_rows(data)
    return CommandResult({"samples": sample_set_to_json(data)}, columns, rows)


COMMANDS: dict[str, Callable[[Any], CommandResult]] = {
    "verify": cmd_verify,
    "tabulate": cmd_tabulate,
    "train": cmd_train,
    "evaluate": cmd_evaluate,
    "piling": cmd_piling,
    "sample": cmd_sample,
}


def _add_global_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None, help="JSON file with command settings")
    parser.add_argument("--seed", type=int, default=None, help="Run seed (default 0)")
    parser.add_argument("--out", default=None, help="Output file (default stdout)")
    parser.add_argument("--format", choices=("json", "csv"), default=None, help="Output format")
    parser.add_argument(
        "--log-level",
        choices=[level.value for level in LogLevel],
        type=LogLevel.parse,
        default=LogLevel.INFO.value,
        help="Minimum log level",
    )
    parser.add_argument(
        "--log-json",
        action=argparse.BooleanOptionalAction,
        default=True,
        help="JSON log lines on stderr (default on)",
    )


def _add_params_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--p", default=None, help="LUM parameter p in [0, inf]")
    parser.add_argument("--q", default=None, help="LUM parameter q in (0, inf]")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lumbound", description="LUM loss risk bounds and training")
    sub = parser.add_subparsers(dest="command", required=True)

    verify = sub.add_parser("verify", help="Randomized sweeps of the comparison bounds")
    _add_global_flags(verify)
    _add_params_flags(verify)
    verify.add_argument("--mode", choices=("general", "noise", "both"), default=None)
    verify.add_argument("--trials", type=int, default=None, help="Trials of the general sweep")
    verify.add_argument("--atom-min", dest="atom_min", type=int, default=None)
    verify.add_argument("--atom-max", dest="atom_max", type=int, default=None)
    verify.add_argument("--noise-trials", dest="noise_trials", type=int, default=None)
    verify.add_argument("--tau", type=float, nargs="+", default=None)
    verify.add_argument("--c-tau", dest="c_tau", type=float, nargs="+", default=None)
    verify.add_argument("--n-atoms", dest="n_atoms", type=int, default=None)
    verify.add_argument("--workers", type=int, default=None)
    verify.add_argument("--trials-csv", dest="trials_csv", default=None, help="Per-trial CSV output")

    tabulate = sub.add_parser("tabulate", help="Pointwise quantities over an eta grid")
    _add_global_flags(tabulate)
    _add_params_flags(tabulate)
    tabulate.add_argument("--resolution", type=int, default=None, help="Grid points on [0, 1]")

    train = sub.add_parser("train", help="Fit a linear LUM machine")
    _add_global_flags(train)
    _add_params_flags(train)
    train.add_argument("--data", default=None, help="Sample set file (.csv or JSON)")
    train.add_argument("--d", type=int, default=None)
    train.add_argument("--n-per-class", dest="n_per_class", type=int, default=None)
    train.add_argument("--separation", type=float, default=None)
    train.add_argument("--lambda", dest="lambda_", type=float, default=None)
    train.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    train.add_argument("--grad-tol", dest="grad_tol", type=float, default=None)
    train.add_argument("--initial-step", dest="initial_step", type=float, default=None)
    train.add_argument("--trace", default=None, help="Trace CSV output")

    evaluate = sub.add_parser("evaluate", help="Risks of a saved model")
    _add_global_flags(evaluate)
    _add_params_flags(evaluate)
    evaluate.add_argument("--model", default=None, help="Model JSON file")
    evaluate.add_argument("--dist", default=None, help="Distribution file (.csv or JSON)")
    evaluate.add_argument("--samples", default=None, help="Sample set file (.csv or JSON)")

    piling = sub.add_parser("piling", help="DWD versus near-hinge data piling")
    _add_global_flags(piling)
    piling.add_argument("--d", type=int, default=None)
    piling.add_argument("--n-per-class", dest="n_per_class", type=int, default=None)
    piling.add_argument("--separation", type=float, default=None)
    piling.add_argument("--n-seeds", dest="n_seeds", type=int, default=None)
    piling.add_argument("--epsilon-fraction", dest="epsilon_fraction", type=float, default=None)
    piling.add_argument("--near-hinge-p", dest="near_hinge_p", type=float, default=None)
    piling.add_argument("--lambda", dest="lambda_", type=float, default=None)
    piling.add_argument("--max-iters", dest="max_iters", type=int, default=None)
    piling.add_argument("--initial-step", dest="initial_step", type=float, default=None)

    sample = sub.add_parser("sample", help="Draw samples from a distribution")
    _add_global_flags(sample)
    sample.add_argument("--source", choices=("grid", "tsybakov", "file"), default=None)
    sample.add_argument("--n", type=int, default=None)
    sample.add_argument("--n-atoms", dest="n_atoms", type=int, default=None)
    sample.add_argument("--tau", type=float, default=None)
    sample.add_argument("--c-tau", dest="c_tau", type=float, default=None)
    sample.add_argument("--dist", default=None, help="Distribution file (.csv or JSON)")
    sample.add_argument("--emit", choices=("samples", "distribution"), default=None)
    return parser


_NON_CONFIG_FLAGS = frozenset({"command", "config", "log_level", "log_json"})


def _overrides(args: argparse.Namespace) -> dict[str, Any]:
    return {k: v for k, v in vars(args).items() if k not in _NON_CONFIG_FLAGS}


def _emit(result: CommandResult, cfg: RunConfig, run_id: str) -> None:
    if cfg.output_format == "csv":
        text = csv_text(result.csv_rows, result.csv_columns)
    else:
        text = dumps_document(result.payload, run_id)
    if cfg.out is None:
        sys.stdout.write(text)
    else:
        Path(cfg.out).write_text(text, encoding="utf-8")


def _fail(code: int, event: str, message: str) -> int:
    get_logger().error(event, message)
    print(f"error: {message}", file=sys.stderr)
    return code


def main(argv: Sequence[str] | None = None) -> int:
    """Entry point for the ``lumbound`` console script."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code in (0, None) else EXIT_USAGE

    configure_observability(
        ObservabilityConfig(log_level=args.log_level, log_json=args.log_json, log_stream=sys.stderr)
    )
    run_id = new_run_id(args.command)
    set_run_id(run_id)

    with with_context(command=args.command):
        try:
            file_values = load_json(args.config) if args.config else None
            cfg = load_run_config(args.command, file_values, _overrides(args))
        except ConfigError as e:
            for issue in e.issues:
                get_logger().error("cli.config_error", issue.message, location=issue.location)
            return _fail(EXIT_USAGE, "cli.config_error", str(e))
        except (OSError, CodecError) as e:
            return _fail(EXIT_USAGE, "cli.config_error", str(e))

        try:
            result = COMMANDS[args.command](cfg)
        except (TrainingError, VerificationError) as e:
            return _fail(EXIT_FAILURE, "cli.run_failed", str(e))
        except (OSError, CodecError, NoiseConditionError, ValueError) as e:
            return _fail(EXIT_USAGE, "cli.input_error", str(e))

        try:
            _emit(result, cfg, run_id)
        except OSError as e:
            return _fail(EXIT_USAGE, "cli.output_error", str(e))
        get_logger().info("cli.done", "command finished", exit_code=result.exit_code)
        return result.exit_code


if __name__ == "__main__":
    sys.exit(main())
