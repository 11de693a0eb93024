from __future__ import annotations

import math
from dataclasses import dataclass, field

from ..core.params import LumParams


@dataclass(slots=True)
class BacktrackingConfig:
    """
    Armijo backtracking for gradient descent.

    Parameters:
      initial_step:
        First trial step, and the cap on every later trial step.
      shrink:
        Factor applied to the step after each failed sufficient-decrease test.
      sufficient_decrease:
        Armijo constant c in f(x - s g) <= f(x) - c s |g|^2.
      growth:
        The next iteration starts from min(initial_step, growth * last accepted step).
      max_backtracks:
        Shrinks attempted before the line search gives up.
    """

    initial_step: float = 1.0
    shrink: float = 0.5
    sufficient_decrease: float = 1e-4
    growth: float = 2.0
    max_backtracks: int = 50

    def __post_init__(self) -> None:
        if not (math.isfinite(self.initial_step) and self.initial_step > 0.0):
            raise ValueError(f"initial_step must be > 0, got {self.initial_step}")
        if not 0.0 < self.shrink < 1.0:
            raise ValueError(f"shrink must lie in (0, 1), got {self.shrink}")
        if not 0.0 < self.sufficient_decrease < 1.0:
            raise ValueError(f"sufficient_decrease must lie in (0, 1), got {self.sufficient_decrease}")
        if self.growth < 1.0:
            raise ValueError(f"growth must be >= 1, got {self.growth}")
        if self.max_backtracks < 1:
            raise ValueError(f"max_backtracks must be >= 1, got {self.max_backtracks}")


@dataclass(slots=True)
class TrainConfig:
    """
    Regularized empirical risk minimization for a linear LUM machine.

    Parameters:
      params:
        Loss family member.
      lambda_:
        Ridge coefficient on w (the intercept is not penalized).
      max_iters:
        Upper bound on accepted descent steps.
      grad_tol:
        Stop once the full gradient norm is at or below this value.
      step_rule:
        Line-search settings.
      accelerated:
        Search from a Nesterov extrapolation of the last two iterates, with a
        restart when that step would increase the objective.
      seed:
        Recorded with the fitted model; initialization is always zero.
    """

    params: LumParams = field(default_factory=LumParams.dwd)
    lambda_: float = 1e-4
    max_iters: int = 1000
    grad_tol: float = 1e-6
    step_rule: BacktrackingConfig = field(default_factory=BacktrackingConfig)
    accelerated: bool = False
    seed: int = 0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.lambda_) and self.lambda_ >= 0.0):
            raise ValueError(f"lambda must be finite and >= 0, got {self.lambda_}")
        if self.max_iters < 1:
            raise ValueError(f"max_iters must be >= 1, got {self.max_iters}")
        if not self.grad_tol > 0.0:
            raise ValueError(f"grad_tol must be > 0, got {self.grad_tol}")
