"""Gradient descent with backtracking for the regularized linear LUM objective.

    J(w, b) = (1/n) sum_i V(y_i (w.x_i + b)) + (lambda/2) |w|^2

J is C^1 and convex for p < inf. For the hinge (p = inf) the gradient uses
the subgradient V'(1) = 0 and a diminishing step takes over when the line
search cannot find sufficient decrease at a kink. With
``accelerated`` each search starts from a Nesterov extrapolation instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ..core.distributions import SampleSet
from ..core.loss import FloatArray, loss_derivative, loss_value
from ..core.params import LumParams
from ..observability.logging import LogLevel, get_logger
from .config import TrainConfig
from .model import LinearModel


class TrainingError(RuntimeError):
    """Raised when the objective or its gradient stops being finite."""


@dataclass(slots=True)
class TrainTrace:
    """
    Per-iterate history of a fit.

    objective_history[k] and grad_norm_history[k] belong to iterate k, so both
    lists have iterations_used + 1 entries.
    """

    objective_history: list[float] = field(default_factory=list)
    grad_norm_history: list[float] = field(default_factory=list)
    iterations_used: int = 0
    converged: bool = False
    seed: int = 0

    def rows(self) -> list[dict[str, float | int]]:
        return [
            {"iter": k, "objective": obj, "grad_norm": gn}
            for k, (obj, gn) in enumerate(zip(self.objective_history, self.grad_norm_history, strict=True))
        ]


def _check_dimensions(model: LinearModel, data: SampleSet) -> None:
    if model.dimension != data.dimension:
        raise ValueError(f"model dimension {model.dimension} does not match data dimension {data.dimension}")


def _margins(model: LinearModel, data: SampleSet) -> FloatArray:
    return data.labels * (data.features @ model.w + model.b)


def empirical_objective(model: LinearModel, data: SampleSet, config: TrainConfig) -> float:
    _check_dimensions(model, data)
    losses = np.asarray(loss_value(config.params, _margins(model, data)))
    penalty = 0.5 * config.lambda_ * math.fsum((model.w * model.w).tolist())
    return math.fsum(losses.tolist()) / data.n_samples + penalty


def _column_sums(terms: FloatArray) -> FloatArray:
    """
    Column sums of ``terms`` by pairwise TwoSum in a fixed order.

    Each level adds rows 2k and 2k+1 and keeps the exact rounding error of
    that addition; the collected errors are added back at the end.
    """
    total = terms
    errors = np.zeros(terms.shape[1])
    while total.shape[0] > 1:
        if total.shape[0] % 2:
            total = np.concatenate([total, np.zeros((1, total.shape[1]))])
        a, b = total[0::2], total[1::2]
        s = a + b
        b_virtual = s - a
        errors = errors + ((a - (s - b_virtual)) + (b - b_virtual)).sum(axis=0)
        total = s
    return total[0] + errors


def empirical_gradient(model: LinearModel, data: SampleSet, config: TrainConfig) -> tuple[FloatArray, float]:
    """(grad_w, grad_b); the intercept carries no penalty term."""
    _check_dimensions(model, data)
    slopes = np.asarray(loss_derivative(config.params, _margins(model, data)))
    coeff = slopes * data.labels / data.n_samples
    grad_w = _column_sums(data.features * coeff[:, np.newaxis]) + config.lambda_ * model.w
    grad_b = math.fsum(coeff.tolist())
    return grad_w, grad_b


def _unpack(x: FloatArray) -> LinearModel:
    return LinearModel(x[:-1], float(x[-1]))


def _objective_at(x: FloatArray, data: SampleSet, config: TrainConfig) -> float:
    if not np.all(np.isfinite(x)):
        return math.inf
    model = _unpack(x)
    with np.errstate(over="ignore", invalid="ignore"):
        if not np.all(np.isfinite(_margins(model, data))):
            return math.inf
    return empirical_objective(model, data, config)


def _gradient_at(x: FloatArray, data: SampleSet, config: TrainConfig) -> FloatArray:
    grad_w, grad_b = empirical_gradient(_unpack(x), data, config)
    return np.append(grad_w, grad_b)


def _line_search(
    start: FloatArray,
    start_value: float,
    g: FloatArray,
    trial: float,
    data: SampleSet,
    config: TrainConfig,
) -> tuple[FloatArray, float, float] | None:
    """Armijo backtracking from ``start`` along -g; None when no trial step qualifies."""
    rule = config.step_rule
    decrease = rule.sufficient_decrease * float(g @ g)
    for _ in range(rule.max_backtracks):
        candidate = start - trial * g
        value = _objective_at(candidate, data, config)
        if value <= start_value - decrease * trial:
            return candidate, value, trial
        trial *= rule.shrink
    return None


def _momentum_step(
    x: FloatArray,
    previous: FloatArray,
    objective: float,
    streak: int,
    trial: float,
    data: SampleSet,
    config: TrainConfig,
) -> tuple[FloatArray, float, float] | None:
    """Backtracking step from the extrapolated point; None asks for a restart."""
    y = x + (streak / (streak + 3)) * (x - previous)
    y_value = _objective_at(y, data, config)
    if not math.isfinite(y_value):
        return None
    g_y = _gradient_at(y, data, config)
    if not np.all(np.isfinite(g_y)):
        return None
    found = _line_search(y, y_value, g_y, trial, data, config)
    # Restart whenever the extrapolated step would raise J.
    if found is None or not found[1] <= objective:
        return None
    return found


def fit(data: SampleSet, config: TrainConfig) -> tuple[LinearModel, TrainTrace]:
    """
    Gradient descent from w = 0, b = 0.

    Each step s satisfies J(z - s g(z)) <= J(z) - c s |g(z)|^2 with s shrunk from
    min(initial_step, growth * previous step). z is the current iterate, or with
    ``config.accelerated`` the Nesterov point x_k + k/(k+3) (x_k - x_{k-1}); the
    momentum restarts whenever that step would increase J, so J never increases.
    Stops at |g| <= grad_tol (converged) or after max_iters accepted steps.
    """
    logger = get_logger()
    log_steps = logger.is_enabled(LogLevel.DEBUG)
    rule = config.step_rule
    x = np.zeros(data.dimension + 1)
    previous = x
    streak = 0
    objective = _objective_at(x, data, config)
    trace = TrainTrace(seed=config.seed)
    step = rule.initial_step

    while True:
        if not math.isfinite(objective):
            raise TrainingError(f"objective became non-finite at iteration {trace.iterations_used}")
        g = _gradient_at(x, data, config)
        grad_norm = float(np.linalg.norm(g))
        if not math.isfinite(grad_norm):
            raise TrainingError(f"gradient became non-finite at iteration {trace.iterations_used}")
        trace.objective_history.append(objective)
        trace.grad_norm_history.append(grad_norm)
        if grad_norm <= config.grad_tol:
            trace.converged = True
            break
        if trace.iterations_used >= config.max_iters:
            break

        trial = min(rule.initial_step, step * rule.growth)
        found = None
        if config.accelerated and streak > 0:
            found = _momentum_step(x, previous, objective, streak, trial, data, config)
            if found is None:
                streak = 0
        if found is None:
            found = _line_search(x, objective, g, trial, data, config)

        if found is None:
            # Kink of a nonsmooth loss: diminishing step, kept only if J does not increase.
            trial = rule.initial_step / math.sqrt(trace.iterations_used + 1)
            candidate = x - trial * g
            value = _objective_at(candidate, data, config)
            if not value <= objective:
                logger.warn(
                    "trainer.stalled",
                    "no descent step found",
                    iteration=trace.iterations_used,
                    objective=objective,
                    grad_norm=grad_norm,
                )
                break
            found = (candidate, value, trial)

        previous = x
        x, objective, step = found
        streak = streak + 1 if config.accelerated else 0
        trace.iterations_used += 1
        if log_steps:
            logger.debug(
                "trainer.step",
                "descent step accepted",
                iteration=trace.iterations_used,
                objective=objective,
                step=step,
                grad_norm=grad_norm,
            )

    logger.info(
        "trainer.done",
        "fit finished",
        params=str(config.params),
        iterations=trace.iterations_used,
        converged=trace.converged,
        objective=trace.objective_history[-1],
        grad_norm=trace.grad_norm_history[-1],
    )
    return _unpack(x), trace


@dataclass(frozen=True, slots=True)
class EmpiricalRisk:
    """Sample means with their standard errors."""

    n: int
    misclassification: float
    misclassification_se: float
    mean_loss: float
    mean_loss_se: float

    def to_json(self) -> dict[str, float | int]:
        return {
            "n": self.n,
            "misclassification": self.misclassification,
            "misclassification_se": self.misclassification_se,
            "mean_loss": self.mean_loss,
            "mean_loss_se": self.mean_loss_se,
        }


def _mean_and_se(values: FloatArray) -> tuple[float, float]:
    n = values.shape[0]
    mean = math.fsum(values.tolist()) / n
    if n < 2:
        return mean, 0.0
    return mean, float(np.std(values, ddof=1)) / math.sqrt(n)


def empirical_risk(model: LinearModel, data: SampleSet, params: LumParams) -> EmpiricalRisk:
    """Misclassification rate of sgn(f) and mean LUM loss on ``data``."""
    _check_dimensions(model, data)
    margins = _margins(model, data)
    scores = data.features @ model.w + model.b
    wrong = (np.where(scores >= 0.0, 1.0, -1.0) != data.labels).astype(np.float64)
    losses = np.asarray(loss_value(params, margins))
    mis, mis_se = _mean_and_se(wrong)
    loss, loss_se = _mean_and_se(losses)
    return EmpiricalRisk(
        n=data.n_samples,
        misclassification=mis,
        misclassification_se=mis_se,
        mean_loss=loss,
        mean_loss_se=loss_se,
    )
