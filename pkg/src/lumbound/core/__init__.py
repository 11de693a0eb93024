from .distributions import (
    DiscreteJoint,
    SampleSet,
    TsybakovReport,
    check_tsybakov,
    make_grid_distribution,
    make_hdlss_gaussians,
    make_tsybakov_distribution,
    sample_from,
    tsybakov_eta,
)
from .loss import kink_point, loss_derivative, loss_value
from .params import INF, ExtendedParam, LumParams, Regime
from .pointwise import (
    bayes_rule,
    excess_at_zero,
    excess_derivative,
    excess_lower_bound,
    is_fisher_consistent,
    minimal_risk,
    minimizer,
    phi,
    sgn,
)
from .risk import (
    LinearScore,
    RiskReport,
    ScoreFunction,
    TabulatedScore,
    bayes_risk,
    bayes_scores,
    generalization_error,
    minimizer_scores,
    misclassification_risk,
    optimal_generalization_error,
    risk_report,
)

__all__ = [
    "INF",
    "DiscreteJoint",
    "ExtendedParam",
    "LinearScore",
    "LumParams",
    "Regime",
    "RiskReport",
    "SampleSet",
    "ScoreFunction",
    "TabulatedScore",
    "TsybakovReport",
    "bayes_risk",
    "bayes_rule",
    "bayes_scores",
    "check_tsybakov",
    "excess_at_zero",
    "excess_derivative",
    "excess_lower_bound",
    "generalization_error",
    "is_fisher_consistent",
    "kink_point",
    "loss_derivative",
    "loss_value",
    "make_grid_distribution",
    "make_hdlss_gaussians",
    "make_tsybakov_distribution",
    "minimal_risk",
    "minimizer",
    "minimizer_scores",
    "misclassification_risk",
    "optimal_generalization_error",
    "phi",
    "risk_report",
    "sample_from",
    "sgn",
    "tsybakov_eta",
]
