"""Comparison-theorem constants and exponents.

Both theorems bound the excess misclassification risk by

    constant * (excess generalization error) ** exponent

The general bound depends only on (p, q); the noise bound applies to p = 0
under a Tsybakov condition with exponent tau and constant c_tau.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum

from ..core.params import ExtendedParam, LumParams, Regime


class BoundRegime(str, Enum):
    P_POSITIVE = "p_positive"
    P_ZERO_FINITE_Q = "p_zero_finite_q"
    P_ZERO_Q_INF = "p_zero_q_inf"
    HINGE = "hinge"
    TSYBAKOV = "tsybakov"

    @classmethod
    def from_regime(cls, regime: Regime) -> BoundRegime:
        return cls(regime.value)


@dataclass(frozen=True, slots=True)
class ComparisonBound:
    """constant * excess ** exponent, with exponent in (0, 1]."""

    constant: float
    exponent: float
    regime: BoundRegime

    def __post_init__(self) -> None:
        if not (math.isfinite(self.constant) and self.constant > 0.0):
            raise ValueError(f"bound constant must be finite and positive, got {self.constant}")
        if not 0.0 < self.exponent <= 1.0:
            raise ValueError(f"bound exponent must lie in (0, 1], got {self.exponent}")

    def evaluate(self, excess_generalization: float) -> float:
        """Right-hand side of the bound; ``excess_generalization`` must be >= 0."""
        if excess_generalization < 0.0:
            raise ValueError(f"excess generalization must be >= 0, got {excess_generalization}")
        return self.constant * excess_generalization**self.exponent

    def to_json(self) -> dict[str, float | str]:
        return {"constant": self.constant, "exponent": self.exponent, "regime": self.regime.value}


def comparison_bound(params: LumParams) -> ComparisonBound:
    """
    Constants of the general comparison bound:

      0 < p < inf      ((p+1)/p, 1)
      p = 0, q < inf   (2 sqrt((q+1)/q), 1/2)
      p = 0, q = inf   (sqrt(2), 1/2)
      p = inf          (1, 1)
    """
    regime = params.regime
    if regime is Regime.HINGE:
        return ComparisonBound(1.0, 1.0, BoundRegime.HINGE)
    if regime is Regime.P_POSITIVE:
        p = params.p.finite_value()
        return ComparisonBound((p + 1.0) / p, 1.0, BoundRegime.P_POSITIVE)
    if regime is Regime.P_ZERO_Q_INF:
        return ComparisonBound(math.sqrt(2.0), 0.5, BoundRegime.P_ZERO_Q_INF)
    q = params.q.finite_value()
    return ComparisonBound(2.0 * math.sqrt((q + 1.0) / q), 0.5, BoundRegime.P_ZERO_FINITE_Q)


def _check_noise(tau: float, c_tau: float) -> None:
    if not (math.isfinite(tau) and tau > 0.0):
        raise ValueError(f"tau must lie in (0, inf), got {tau}")
    if not (math.isfinite(c_tau) and c_tau > 0.0):
        raise ValueError(f"c_tau must be a finite positive number, got {c_tau}")


def noise_comparison_bound(q: ExtendedParam, tau: float, c_tau: float) -> ComparisonBound:
    """
    Noise-condition bound for p = 0:

      constant = c_tau^(-tau/(tau+2)) * 2^(1 + r (tau+1)/(tau+2)) * s^((tau+1)/(tau+2))
      exponent = (tau+1)/(tau+2)

    with r = (2q+1)/(q+1) and s = (q+1)/q, which tend to 2 and 1 as q -> inf.
    """
    _check_noise(tau, c_tau)
    if q.is_infinite:
        r, s = 2.0, 1.0
    else:
        qv = q.finite_value()
        if qv <= 0.0:
            raise ValueError("q must be > 0")
        r, s = (2.0 * qv + 1.0) / (qv + 1.0), (qv + 1.0) / qv
    exponent = (tau + 1.0) / (tau + 2.0)
    constant = c_tau ** (-tau / (tau + 2.0)) * 2.0 ** (1.0 + r * exponent) * s**exponent
    return ComparisonBound(constant, exponent, BoundRegime.TSYBAKOV)


def crossover_excess(q: ExtendedParam, tau: float, c_tau: float) -> float:
    """
    Excess generalization error below which the noise bound is the smaller one.

    Solves C_q E^(1/2) = K E^alpha for E, where (C_q, 1/2) is the p = 0 general
    bound and (K, alpha) the noise bound; alpha > 1/2 for every tau > 0.
    """
    general = comparison_bound(LumParams(ExtendedParam.finite(0.0), q))
    noise = noise_comparison_bound(q, tau, c_tau)
    gap = noise.exponent - general.exponent
    return float((general.constant / noise.constant) ** (1.0 / gap))
