from .bounds import BoundRegime, ComparisonBound, comparison_bound, crossover_excess, noise_comparison_bound
from .verifier import (
    BoundCheck,
    NoiseConditionError,
    NoiseSweepConfig,
    ScoreGenerator,
    SweepConfig,
    TightnessReport,
    TrialRecord,
    VerificationError,
    VerificationReport,
    noise_trial_sweep,
    random_trial_sweep,
    tightness_scan,
    verify_comparison,
    verify_noise_comparison,
)

__all__ = [
    "BoundCheck",
    "BoundRegime",
    "ComparisonBound",
    "NoiseConditionError",
    "NoiseSweepConfig",
    "ScoreGenerator",
    "SweepConfig",
    "TightnessReport",
    "TrialRecord",
    "VerificationError",
    "VerificationReport",
    "comparison_bound",
    "crossover_excess",
    "noise_comparison_bound",
    "noise_trial_sweep",
    "random_trial_sweep",
    "tightness_scan",
    "verify_comparison",
    "verify_noise_comparison",
]
