"""Numerical certification of the comparison bounds.

A single check evaluates both sides of a bound on one (distribution, score)
pair by exact atom sums. Sweeps repeat the check over randomized pairs; each
trial draws from its own generator keyed on (seed, trial index), so serial and
threaded runs produce identical reports.
"""

from __future__ import annotations

import contextvars
import math
from collections.abc import Callable, Sequence
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..core.distributions import (
    DEFAULT_T_GRID,
    DiscreteJoint,
    check_tsybakov,
    grid_points,
    make_tsybakov_distribution,
)
from ..core.params import INF, ExtendedParam, LumParams
from ..core.pointwise import minimizer
from ..core.risk import ScoreFunction, TabulatedScore, risk_report
from ..observability.logging import get_logger, with_context
from ..utils.seeding import trial_rng
from ..utils.time import time_block
from .bounds import ComparisonBound, comparison_bound, noise_comparison_bound

# Excess generalization below this is an upstream bug, not rounding.
EXCESS_FLOOR = -1e-12
VIOLATION_TOLERANCE = 1e-10
# |f_P| cap used by the sweep generators.
GENERATOR_CLIP = 10.0


class VerificationError(RuntimeError):
    """Raised when an excess generalization error is negative beyond rounding."""


class NoiseConditionError(ValueError):
    """Raised when a distribution does not satisfy the requested noise condition."""


class ScoreGenerator(str, Enum):
    """
    Shapes of random tabulated score functions.

    UNIFORM:
      independent values in [-3, 3].
    FLIPPED:
      f_P with its sign flipped and rescaled on a random subset of atoms.
    PIECEWISE:
      constants on a few contiguous runs of atoms.
    NEAR_ZERO:
      tiny values of the wrong sign on a random subset, f_P elsewhere.
    """

    UNIFORM = "uniform"
    FLIPPED = "flipped"
    PIECEWISE = "piecewise"
    NEAR_ZERO = "near_zero"


@dataclass(frozen=True, slots=True)
class BoundCheck:
    """Both sides of one bound; slack = rhs - lhs."""

    lhs: float
    rhs: float
    slack: float
    excess_generalization: float

    @property
    def violated(self) -> bool:
        return self.slack < -VIOLATION_TOLERANCE

    @property
    def ratio(self) -> float:
        if self.rhs > 0.0:
            return self.lhs / self.rhs
        return 0.0 if self.lhs <= VIOLATION_TOLERANCE else math.inf


def _check(dist: DiscreteJoint, f: ScoreFunction, params: LumParams, bound: ComparisonBound) -> BoundCheck:
    report = risk_report(dist, f, params)
    excess = report.excess_generalization
    if excess < EXCESS_FLOOR:
        raise VerificationError(
            f"excess generalization error {excess!r} is negative for {params}; "
            "the minimal risk or the risk sums are inconsistent"
        )
    excess = max(excess, 0.0)
    lhs = report.excess_misclassification
    rhs = bound.evaluate(excess)
    return BoundCheck(lhs=lhs, rhs=rhs, slack=rhs - lhs, excess_generalization=excess)


def verify_comparison(dist: DiscreteJoint, f: ScoreFunction, params: LumParams) -> BoundCheck:
    """Evaluate the general comparison bound for ``params`` on (dist, f)."""
    return _check(dist, f, params, comparison_bound(params))


def verify_noise_comparison(
    dist: DiscreteJoint,
    f: ScoreFunction,
    q: ExtendedParam,
    tau: float,
    c_tau: float,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
) -> BoundCheck:
    """Evaluate the noise-condition bound (p = 0) after confirming the condition holds."""
    condition = check_tsybakov(dist, tau, c_tau, t_grid)
    if not condition.passed:
        raise NoiseConditionError(
            f"distribution fails the noise condition for tau={tau}, c_tau={c_tau}: "
            f"mass exceeds t^tau by {condition.max_violation:.3g} at t={condition.worst_t} "
            f"(allowed slack {condition.slack:.3g})"
        )
    params = LumParams(ExtendedParam.finite(0.0), q)
    return _check(dist, f, params, noise_comparison_bound(q, tau, c_tau))


@dataclass(frozen=True, slots=True)
class TrialRecord:
    index: int
    label: str
    generator: ScoreGenerator
    n_atoms: int
    lhs: float
    rhs: float
    slack: float

    def to_row(self) -> dict[str, object]:
        return {
            "index": self.index,
            "label": self.label,
            "generator": self.generator.value,
            "n_atoms": self.n_atoms,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "slack": self.slack,
        }


@dataclass(frozen=True, slots=True)
class VerificationReport:
    """
    Aggregate of a sweep.

    violations counts trials with lhs > rhs + 1e-10. max_ratio is the largest
    lhs/rhs seen over trials with rhs > 0. ``bounds`` lists the bound used for
    each label appearing in the sweep.
    """

    trials: int
    violations: int
    min_slack: float
    max_ratio: float
    seed: int
    bounds: tuple[tuple[str, ComparisonBound], ...]

    @property
    def passed(self) -> bool:
        return self.violations == 0

    def to_json(self) -> dict[str, object]:
        return {
            "trials": self.trials,
            "violations": self.violations,
            "min_slack": self.min_slack,
            "max_ratio": self.max_ratio,
            "seed": self.seed,
            "bounds": {label: bound.to_json() for label, bound in self.bounds},
        }


TrialCallback = Callable[[TrialRecord], None]


@dataclass(slots=True)
class SweepConfig:
    """
    Randomized check of the general comparison bound.

    Parameters:
      n_trials:
        Number of (distribution, score) pairs.
      atom_range:
        Inclusive (min, max) number of atoms per random distribution.
      params_list:
        Loss parameters; trial i uses params_list[i % len(params_list)].
      generators:
        Score shapes to draw from, uniformly per trial.
      snap_probability:
        Chance that an atom's eta is replaced by one of 0, 1/2, 1.
      workers:
        Threads used to run trials; 1 runs them inline.
    """

    n_trials: int = 1000
    atom_range: tuple[int, int] = (1, 20)
    params_list: list[LumParams] = field(default_factory=lambda: [LumParams.dwd()])
    generators: tuple[ScoreGenerator, ...] = tuple(ScoreGenerator)
    snap_probability: float = 0.1
    workers: int = 1

    def __post_init__(self) -> None:
        if self.n_trials < 1:
            raise ValueError(f"n_trials must be >= 1, got {self.n_trials}")
        lo, hi = self.atom_range
        if lo < 1 or hi < lo:
            raise ValueError(f"atom_range must satisfy 1 <= min <= max, got {self.atom_range}")
        if not self.params_list:
            raise ValueError("params_list must not be empty")
        if not self.generators:
            raise ValueError("generators must not be empty")
        if not 0.0 <= self.snap_probability <= 1.0:
            raise ValueError(f"snap_probability must lie in [0, 1], got {self.snap_probability}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


@dataclass(slots=True)
class NoiseSweepConfig:
    """
    Randomized check of the noise-condition bound on constructed distributions.

    Parameters:
      trials_per_pair:
        Score functions drawn for each (tau, c_tau) pair.
      tau_list, c_tau_list:
        Noise exponents and constants; every combination is swept.
      q_list:
        Values of q (p = 0); trial k of a pair uses q_list[k % len(q_list)].
      n_atoms:
        Atoms in each constructed distribution.
      generators, workers:
        As in SweepConfig.
    """

    trials_per_pair: int = 1000
    tau_list: tuple[float, ...] = (0.5, 1.0, 2.0)
    c_tau_list: tuple[float, ...] = (0.5, 1.0)
    q_list: tuple[ExtendedParam, ...] = (ExtendedParam.finite(1.0), INF)
    n_atoms: int = 200
    generators: tuple[ScoreGenerator, ...] = tuple(ScoreGenerator)
    workers: int = 1

    def __post_init__(self) -> None:
        if self.trials_per_pair < 1:
            raise ValueError(f"trials_per_pair must be >= 1, got {self.trials_per_pair}")
        if not (self.tau_list and self.c_tau_list and self.q_list and self.generators):
            raise ValueError("tau_list, c_tau_list, q_list and generators must not be empty")
        if self.n_atoms < 1:
            raise ValueError(f"n_atoms must be >= 1, got {self.n_atoms}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")


def random_distribution(rng: np.random.Generator, n_atoms: int, snap_probability: float = 0.1) -> DiscreteJoint:
    """Grid atoms, Dirichlet(1, ..., 1) weights, uniform eta with occasional snapping."""
    weights = rng.dirichlet(np.ones(n_atoms))
    etas = rng.uniform(0.0, 1.0, n_atoms)
    snap = rng.random(n_atoms) < snap_probability
    snapped = rng.choice(np.array([0.0, 0.5, 1.0]), size=n_atoms)
    etas = np.where(snap, snapped, etas)
    return DiscreteJoint.normalized(atoms=grid_points(n_atoms), weights=weights, etas=etas)


def random_score(
    rng: np.random.Generator,
    dist: DiscreteJoint,
    params: LumParams,
    generator: ScoreGenerator,
) -> TabulatedScore:
    """Draw a tabulated score of the given shape for ``dist``."""
    n = dist.n_atoms
    if generator is ScoreGenerator.UNIFORM:
        return TabulatedScore(rng.uniform(-3.0, 3.0, n))
    fp = np.clip(np.asarray(minimizer(params, dist.etas), dtype=np.float64), -GENERATOR_CLIP, GENERATOR_CLIP)
    if generator is ScoreGenerator.FLIPPED:
        mask = rng.random(n) < 0.5
        scale = rng.uniform(0.0, 2.0, n)
        return TabulatedScore(np.where(mask, -scale * fp, fp))
    if generator is ScoreGenerator.PIECEWISE:
        n_runs = int(rng.integers(1, min(n, 4) + 1))
        cuts = np.zeros(0, dtype=np.int64)
        if n_runs > 1:
            cuts = np.sort(rng.choice(np.arange(1, n), size=n_runs - 1, replace=False))
        levels = rng.uniform(-3.0, 3.0, n_runs)
        run_of_atom = np.searchsorted(cuts, np.arange(n), side="right")
        return TabulatedScore(levels[run_of_atom])
    fc = np.where(dist.etas >= 0.5, 1.0, -1.0)
    eps = 10.0 ** rng.uniform(-6.0, 0.0, n)
    mask = rng.random(n) < 0.5
    return TabulatedScore(np.where(mask, -eps * fc, fp))


@dataclass(slots=True)
class _Tally:
    trials: int = 0
    violations: int = 0
    min_slack: float = math.inf
    max_ratio: float = 0.0

    def add(self, record: TrialRecord) -> None:
        check = BoundCheck(record.lhs, record.rhs, record.slack, 0.0)
        self.trials += 1
        self.min_slack = min(self.min_slack, record.slack)
        if check.violated:
            self.violations += 1
        if record.rhs > 0.0:
            self.max_ratio = max(self.max_ratio, check.ratio)


def _run_trials(
    trial: Callable[[int], TrialRecord],
    n_trials: int,
    workers: int,
    on_trial: TrialCallback | None,
) -> _Tally:
    logger = get_logger()
    tally = _Tally()

    def consume(record: TrialRecord) -> None:
        tally.add(record)
        if record.slack < -VIOLATION_TOLERANCE:
            logger.warn(
                "sweep.violation",
                "bound violated",
                trial=record.index,
                label=record.label,
                generator=record.generator.value,
                lhs=record.lhs,
                rhs=record.rhs,
                slack=record.slack,
            )
        if on_trial is not None:
            on_trial(record)

    if workers == 1:
        for index in range(n_trials):
            consume(trial(index))
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            # Pool threads start with an empty context; each trial runs in a copy of the caller's.
            futures = [pool.submit(contextvars.copy_context().run, trial, index) for index in range(n_trials)]
            # Results are consumed in submission order, so records stream by trial index
            for future in futures:
                consume(future.result())
    return tally


def _report(tally: _Tally, seed: int, bounds: dict[str, ComparisonBound]) -> VerificationReport:
    return VerificationReport(
        trials=tally.trials,
        violations=tally.violations,
        min_slack=tally.min_slack,
        max_ratio=tally.max_ratio,
        seed=seed,
        bounds=tuple(bounds.items()),
    )


def random_trial_sweep(
    config: SweepConfig,
    seed: int,
    on_trial: TrialCallback | None = None,
) -> VerificationReport:
    """Check the general bound on ``config.n_trials`` random (distribution, score) pairs."""
    logger = get_logger()
    bounds = {str(params): comparison_bound(params) for params in config.params_list}
    lo, hi = config.atom_range

    def trial(index: int) -> TrialRecord:
        rng = trial_rng(seed, index)
        params = config.params_list[index % len(config.params_list)]
        generator = config.generators[int(rng.integers(len(config.generators)))]
        n_atoms = int(rng.integers(lo, hi + 1))
        with with_context(trial=index, regime=params.regime.value):
            dist = random_distribution(rng, n_atoms, config.snap_probability)
            f = random_score(rng, dist, params, generator)
            check = _check(dist, f, params, bounds[str(params)])
            logger.debug("sweep.trial", "trial evaluated", generator=generator.value, slack=check.slack)
        return TrialRecord(index, str(params), generator, n_atoms, check.lhs, check.rhs, check.slack)

    logger.info("sweep.start", "general bound sweep", trials=config.n_trials, seed=seed, labels=list(bounds))
    with time_block() as elapsed:
        tally = _run_trials(trial, config.n_trials, config.workers, on_trial)
    report = _report(tally, seed, bounds)
    logger.info(
        "sweep.done",
        "general bound sweep finished",
        trials=report.trials,
        violations=report.violations,
        min_slack=report.min_slack,
        max_ratio=report.max_ratio,
        seconds=elapsed.seconds,
    )
    return report


def noise_label(q: ExtendedParam, tau: float, c_tau: float) -> str:
    return f"q={q},tau={tau:g},c_tau={c_tau:g}"


def noise_trial_sweep(
    config: NoiseSweepConfig,
    seed: int,
    on_trial: TrialCallback | None = None,
) -> VerificationReport:
    """Check the noise-condition bound on constructed distributions for every (tau, c_tau) pair."""
    logger = get_logger()
    pairs = [(tau, c_tau) for tau in config.tau_list for c_tau in config.c_tau_list]
    dists: list[DiscreteJoint] = []
    bounds: dict[str, ComparisonBound] = {}
    for tau, c_tau in pairs:
        dist = make_tsybakov_distribution(tau, c_tau, config.n_atoms)
        condition = check_tsybakov(dist, tau, c_tau)
        if not condition.passed:
            raise NoiseConditionError(
                f"constructed distribution fails its own noise condition (tau={tau}, c_tau={c_tau})"
            )
        dists.append(dist)
        for q in config.q_list:
            bounds[noise_label(q, tau, c_tau)] = noise_comparison_bound(q, tau, c_tau)

    per_pair = config.trials_per_pair

    def trial(index: int) -> TrialRecord:
        pair_index, k = divmod(index, per_pair)
        tau, c_tau = pairs[pair_index]
        dist = dists[pair_index]
        q = config.q_list[k % len(config.q_list)]
        params = LumParams(ExtendedParam.finite(0.0), q)
        label = noise_label(q, tau, c_tau)
        rng = trial_rng(seed, index)
        generator = config.generators[int(rng.integers(len(config.generators)))]
        with with_context(trial=index, regime="tsybakov"):
            f = random_score(rng, dist, params, generator)
            check = _check(dist, f, params, bounds[label])
        return TrialRecord(index, label, generator, dist.n_atoms, check.lhs, check.rhs, check.slack)

    n_trials = per_pair * len(pairs)
    logger.info("sweep.start", "noise bound sweep", trials=n_trials, pairs=len(pairs), seed=seed)
    with time_block() as elapsed:
        tally = _run_trials(trial, n_trials, config.workers, on_trial)
    report = _report(tally, seed, bounds)
    logger.info(
        "sweep.done",
        "noise bound sweep finished",
        trials=report.trials,
        violations=report.violations,
        min_slack=report.min_slack,
        seconds=elapsed.seconds,
    )
    return report


@dataclass(frozen=True, slots=True)
class TightnessReport:
    """Largest lhs/rhs over single-atom distributions, and where it was found."""

    sup_ratio: float
    argmax_eta: float
    argmax_score: float

    def to_json(self) -> dict[str, float]:
        return {"sup_ratio": self.sup_ratio, "argmax_eta": self.argmax_eta, "argmax_score": self.argmax_score}


TIGHTNESS_STEPS: tuple[float, ...] = (1e-3, 0.1, 1.0)


def tightness_scan(params: LumParams, resolution: int) -> TightnessReport:
    """
    Scan single-atom distributions with eta = k/resolution, 0 < k < resolution.

    Candidate scores at each eta are 0, -f_P and -s f_c for s in TIGHTNESS_STEPS.
    """
    if resolution < 10:
        raise ValueError(f"resolution must be >= 10, got {resolution}")
    bound = comparison_bound(params)
    best = TightnessReport(sup_ratio=0.0, argmax_eta=0.5, argmax_score=0.0)
    for k in range(1, resolution):
        eta = k / resolution
        dist = DiscreteJoint(atoms=np.zeros((1, 1)), weights=np.ones(1), etas=np.array([eta]))
        fp = float(np.clip(minimizer(params, eta), -GENERATOR_CLIP, GENERATOR_CLIP))
        fc = 1.0 if eta >= 0.5 else -1.0
        candidates = [0.0, -fp, *(-s * fc for s in TIGHTNESS_STEPS)]
        for value in candidates:
            check = _check(dist, TabulatedScore(np.array([value])), params, bound)
            if check.rhs > 0.0 and check.ratio > best.sup_ratio:
                best = TightnessReport(sup_ratio=check.ratio, argmax_eta=eta, argmax_score=value)
    get_logger().debug(
        "tightness.done",
        "tightness scan finished",
        params=str(params),
        sup_ratio=best.sup_ratio,
        argmax_eta=best.argmax_eta,
    )
    return best

