"""Data-piling diagnostic for linear classifiers in HDLSS settings.

Piling is measured on the signed projections s_i = y_i (w.x_i + b)/|w| of the
training points onto the normal vector, so piles at the two margins land on the
same value. Split their range into bins of width eps = epsilon_fraction *
(max s - min s) and report the share of points within eps/2 of the most
populated bin's center. Identical projections score 1;
projections spread uniformly score about epsilon_fraction.
"""

from __future__ import annotations

import statistics
from dataclasses import dataclass, field

import numpy as np

from ..core.distributions import SampleSet, make_hdlss_gaussians
from ..core.params import LumParams
from ..observability.logging import get_logger, with_context
from .config import BacktrackingConfig, TrainConfig
from .model import LinearModel
from .trainer import fit


def data_piling_score(model: LinearModel, data: SampleSet, epsilon_fraction: float) -> float:
    if not 0.0 < epsilon_fraction < 1.0:
        raise ValueError(f"epsilon_fraction must lie in (0, 1), got {epsilon_fraction}")
    if model.dimension != data.dimension:
        raise ValueError(f"model dimension {model.dimension} does not match data dimension {data.dimension}")
    norm = float(np.linalg.norm(model.w))
    if norm == 0.0:
        raise ValueError("piling is undefined for a model with w = 0")
    s = data.labels * (data.features @ model.w + model.b) / norm
    lo, hi = float(np.min(s)), float(np.max(s))
    spread = hi - lo
    if spread == 0.0:
        return 1.0
    n_bins = max(1, round(1.0 / epsilon_fraction))
    width = spread / n_bins
    counts, edges = np.histogram(s, bins=n_bins, range=(lo, hi))
    mode = int(np.argmax(counts))
    center = 0.5 * (edges[mode] + edges[mode + 1])
    # Relative slack keeps points on the mode bin's own edges despite rounding in the edges.
    inside = np.abs(s - center) <= 0.5 * width * (1.0 + 1e-9)
    return float(np.count_nonzero(inside)) / s.shape[0]


def _default_train() -> TrainConfig:
    return TrainConfig(
        lambda_=1.0,
        max_iters=50000,
        grad_tol=1e-6,
        step_rule=BacktrackingConfig(initial_step=1.0),
        accelerated=True,
    )


@dataclass(slots=True)
class PilingConfig:
    """
    DWD versus near-hinge comparison on two-class HDLSS Gaussians.

    Parameters:
      d, n_per_class, mean_separation:
        Data shape, see make_hdlss_gaussians.
      base_seed, n_seeds:
        Data sets are drawn with seeds base_seed .. base_seed + n_seeds - 1.
      epsilon_fraction:
        Bin width of the piling score as a share of the projection range.
      smooth, near_hinge:
        The two loss members being compared.
      train:
        Optimizer settings shared by both fits; its params field is replaced.
    """

    d: int = 500
    n_per_class: int = 25
    mean_separation: float = 2.0
    base_seed: int = 7
    n_seeds: int = 5
    epsilon_fraction: float = 0.05
    smooth: LumParams = field(default_factory=LumParams.dwd)
    near_hinge: LumParams = field(default_factory=lambda: LumParams.of(1000.0, 1.0))
    train: TrainConfig = field(default_factory=_default_train)

    def __post_init__(self) -> None:
        if self.n_seeds < 1:
            raise ValueError(f"n_seeds must be >= 1, got {self.n_seeds}")
        if not 0.0 < self.epsilon_fraction < 1.0:
            raise ValueError(f"epsilon_fraction must lie in (0, 1), got {self.epsilon_fraction}")


@dataclass(frozen=True, slots=True)
class PilingRun:
    seed: int
    smooth_score: float
    near_hinge_score: float
    smooth_converged: bool
    near_hinge_converged: bool

    def to_json(self) -> dict[str, object]:
        return {
            "seed": self.seed,
            "smooth_score": self.smooth_score,
            "near_hinge_score": self.near_hinge_score,
            "smooth_converged": self.smooth_converged,
            "near_hinge_converged": self.near_hinge_converged,
        }


@dataclass(frozen=True, slots=True)
class PilingComparison:
    runs: tuple[PilingRun, ...]
    median_smooth: float
    median_near_hinge: float

    @property
    def direction_holds(self) -> bool:
        """True when the near-hinge model piles strictly more than the smooth one."""
        return self.median_near_hinge > self.median_smooth

    @property
    def all_converged(self) -> bool:
        return all(r.smooth_converged and r.near_hinge_converged for r in self.runs)

    def to_json(self) -> dict[str, object]:
        return {
            "runs": [r.to_json() for r in self.runs],
            "median_smooth": self.median_smooth,
            "median_near_hinge": self.median_near_hinge,
            "direction_holds": self.direction_holds,
            "all_converged": self.all_converged,
        }


def _train_with(base: TrainConfig, params: LumParams, seed: int) -> TrainConfig:
    return TrainConfig(
        params=params,
        lambda_=base.lambda_,
        max_iters=base.max_iters,
        grad_tol=base.grad_tol,
        step_rule=base.step_rule,
        accelerated=base.accelerated,
        seed=seed,
    )


def compare_piling(config: PilingConfig) -> PilingComparison:
    logger = get_logger()
    runs: list[PilingRun] = []
    for seed in range(config.base_seed, config.base_seed + config.n_seeds):
        data = make_hdlss_gaussians(config.d, config.n_per_class, config.mean_separation, seed)
        with with_context(trial=seed):
            smooth_model, smooth_trace = fit(data, _train_with(config.train, config.smooth, seed))
            hinge_model, hinge_trace = fit(data, _train_with(config.train, config.near_hinge, seed))
        run = PilingRun(
            seed=seed,
            smooth_score=data_piling_score(smooth_model, data, config.epsilon_fraction),
            near_hinge_score=data_piling_score(hinge_model, data, config.epsilon_fraction),
            smooth_converged=smooth_trace.converged,
            near_hinge_converged=hinge_trace.converged,
        )
        if not (run.smooth_converged and run.near_hinge_converged):
            logger.warn(
                "piling.unconverged",
                "a piling fit stopped before reaching grad_tol",
                seed=seed,
                smooth_converged=run.smooth_converged,
                near_hinge_converged=run.near_hinge_converged,
            )
        logger.debug(
            "piling.run",
            "piling scores computed",
            seed=seed,
            smooth=run.smooth_score,
            near_hinge=run.near_hinge_score,
        )
        runs.append(run)
    comparison = PilingComparison(
        runs=tuple(runs),
        median_smooth=statistics.median(r.smooth_score for r in runs),
        median_near_hinge=statistics.median(r.near_hinge_score for r in runs),
    )
    logger.info(
        "piling.done",
        "piling comparison finished",
        median_smooth=comparison.median_smooth,
        median_near_hinge=comparison.median_near_hinge,
        direction_holds=comparison.direction_holds,
        all_converged=comparison.all_converged,
    )
    return comparison
