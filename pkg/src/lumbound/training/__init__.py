from .config import BacktrackingConfig, TrainConfig
from .model import LinearModel, predict
from .piling import PilingComparison, PilingConfig, PilingRun, compare_piling, data_piling_score
from .trainer import (
    EmpiricalRisk,
    TrainingError,
    TrainTrace,
    empirical_gradient,
    empirical_objective,
    empirical_risk,
    fit,
)

__all__ = [
    "BacktrackingConfig",
    "EmpiricalRisk",
    "LinearModel",
    "PilingComparison",
    "PilingConfig",
    "PilingRun",
    "TrainConfig",
    "TrainTrace",
    "TrainingError",
    "compare_piling",
    "data_piling_score",
    "empirical_gradient",
    "empirical_objective",
    "empirical_risk",
    "fit",
    "predict",
]
