from __future__ import annotations

import sys as _sys

from .core import (
    INF,
    DiscreteJoint,
    LinearScore,
    LumParams,
    Regime,
    SampleSet,
    TabulatedScore,
    loss_derivative,
    loss_value,
    minimal_risk,
    minimizer,
)
from .training import LinearModel, TrainConfig, fit
from .verification import ComparisonBound, comparison_bound, noise_comparison_bound

__all__ = [
    "__version__",
    "core",
    "observability",
    "training",
    "utils",
    "verification",
    # Convenience re-exports
    "INF",
    "LumParams",
    "Regime",
    "loss_value",
    "loss_derivative",
    "minimizer",
    "minimal_risk",
    "DiscreteJoint",
    "SampleSet",
    "LinearScore",
    "TabulatedScore",
    "ComparisonBound",
    "comparison_bound",
    "noise_comparison_bound",
    "LinearModel",
    "TrainConfig",
    "fit",
]

__version__ = "0.1.0"

_PKG_NAME = "lumbound"
_MIN_PY = (3, 11)

if _sys.version_info < _MIN_PY:
    raise RuntimeError(
        f"{_PKG_NAME} requires Python {'.'.join(map(str, _MIN_PY))}+; "
        f"detected {_sys.version.split()[0]}"
    )
