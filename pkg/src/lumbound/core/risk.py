"""Exact risks of score functions over a DiscreteJoint.

Every integral is a finite sum over atoms, accumulated with ``math.fsum`` so
results do not depend on atom order.
"""

from __future__ import annotations

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass

import numpy as np

from .distributions import DiscreteJoint
from .loss import FloatArray
from .params import LumParams
from .pointwise import minimal_risk, minimizer, phi

# Magnitude used in place of an infinite f_P when a tabulated f_P is requested.
DEFAULT_SCORE_CLIP = 1e3


class ScoreFunction(ABC):
    """A real-valued f restricted to the atoms of a distribution."""

    @abstractmethod
    def evaluate(self, dist: DiscreteJoint) -> FloatArray:
        """Values f(x_i), one per atom of ``dist``."""


@dataclass(frozen=True, eq=False)
class TabulatedScore(ScoreFunction):
    """Per-atom values aligned with the atoms of the distribution it is used on."""

    values: FloatArray

    def __post_init__(self) -> None:
        values = np.array(self.values, dtype=np.float64).reshape(-1)
        if not np.all(np.isfinite(values)):
            raise ValueError("tabulated scores must be finite")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def constant(cls, value: float, n_atoms: int) -> TabulatedScore:
        return cls(np.full(n_atoms, float(value)))

    def evaluate(self, dist: DiscreteJoint) -> FloatArray:
        if self.values.shape[0] != dist.n_atoms:
            raise ValueError(
                f"tabulated score has {self.values.shape[0]} entries, distribution has {dist.n_atoms} atoms"
            )
        return self.values


@dataclass(frozen=True, eq=False)
class LinearScore(ScoreFunction):
    """f(x) = w.x + b."""

    w: FloatArray
    b: float = 0.0

    def __post_init__(self) -> None:
        w = np.array(self.w, dtype=np.float64).reshape(-1)
        if not (np.all(np.isfinite(w)) and math.isfinite(self.b)):
            raise ValueError("linear score coefficients must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    def evaluate(self, dist: DiscreteJoint) -> FloatArray:
        if self.w.shape[0] != dist.dimension:
            raise ValueError(
                f"weight dimension {self.w.shape[0]} does not match atom dimension {dist.dimension}"
            )
        return dist.atoms @ self.w + self.b


def _wsum(weights: FloatArray, values: FloatArray) -> float:
    return math.fsum((weights * values).tolist())


def misclassification_risk(dist: DiscreteJoint, f: ScoreFunction) -> float:
    """R(sgn f) with sgn(0) = +1."""
    positive = f.evaluate(dist) >= 0.0
    wrong = np.where(positive, 1.0 - dist.etas, dist.etas)
    return _wsum(dist.weights, wrong)


def bayes_risk(dist: DiscreteJoint) -> float:
    return _wsum(dist.weights, np.minimum(dist.etas, 1.0 - dist.etas))


def generalization_error(dist: DiscreteJoint, f: ScoreFunction, params: LumParams) -> float:
    """E(f) = sum_i w_i Phi(f(x_i); eta_i)."""
    values = np.asarray(phi(params, dist.etas, f.evaluate(dist)))
    return _wsum(dist.weights, values)


def optimal_generalization_error(dist: DiscreteJoint, params: LumParams) -> float:
    """E(f_P) from the closed-form minimal risk; V is never evaluated at infinity."""
    return _wsum(dist.weights, np.asarray(minimal_risk(params, dist.etas)))


def bayes_scores(dist: DiscreteJoint) -> TabulatedScore:
    """f_c tabulated on the atoms of ``dist``."""
    return TabulatedScore(np.where(dist.etas >= 0.5, 1.0, -1.0))


def minimizer_scores(
    dist: DiscreteJoint, params: LumParams, clip: float = DEFAULT_SCORE_CLIP
) -> TabulatedScore:
    """f_P tabulated on the atoms of ``dist``, with magnitudes clipped to ``clip``."""
    if not (math.isfinite(clip) and clip > 0.0):
        raise ValueError(f"clip must be a finite positive number, got {clip}")
    values = np.asarray(minimizer(params, dist.etas), dtype=np.float64)
    return TabulatedScore(np.clip(values, -clip, clip))


@dataclass(frozen=True, slots=True)
class RiskReport:
    """
    The four risks of one score function and the two excess quantities.

    excess_misclassification = R(sgn f) - R(f_c)
    excess_generalization    = E(f) - E(f_P)
    """

    misclassification_risk: float
    bayes_risk: float
    generalization_error: float
    optimal_generalization_error: float
    excess_misclassification: float
    excess_generalization: float

    def to_json(self) -> dict[str, float]:
        return {
            "misclassification_risk": self.misclassification_risk,
            "bayes_risk": self.bayes_risk,
            "generalization_error": self.generalization_error,
            "optimal_generalization_error": self.optimal_generalization_error,
            "excess_misclassification": self.excess_misclassification,
            "excess_generalization": self.excess_generalization,
        }


def risk_report(dist: DiscreteJoint, f: ScoreFunction, params: LumParams) -> RiskReport:
    r = misclassification_risk(dist, f)
    r_star = bayes_risk(dist)
    e = generalization_error(dist, f, params)
    e_star = optimal_generalization_error(dist, params)
    return RiskReport(
        misclassification_risk=r,
        bayes_risk=r_star,
        generalization_error=e,
        optimal_generalization_error=e_star,
        excess_misclassification=r - r_star,
        excess_generalization=e - e_star,
    )
