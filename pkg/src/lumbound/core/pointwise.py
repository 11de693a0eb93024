"""Pointwise (conditional) risk of the LUM loss.

For a fixed x with eta = P(y = 1 | x) the conditional risk of a score t is

    Phi(t; eta) = eta * V(t) + (1 - eta) * V(-t).

This module gives Phi, its closed-form minimizer f_P(eta), the minimal risk
Phi(f_P), and the excess g(a) = Phi(0) - Phi(f_P) written in the margin
a = |2 eta - 1| together with g'(a) and the lower bounds on g used by the
comparison theorems.

Conventions:
  - sgn(0) = +1 everywhere, matching the Bayes rule's ">=" branch.
  - eta outside [0, 1] is rejected, never clamped.
  - minimizer returns +/-inf at eta in {0, 1} when p < inf; minimal_risk and
    g never evaluate V at those infinite arguments.
"""

from __future__ import annotations

from typing import overload

import numpy as np
import numpy.typing as npt

from .loss import FloatArray, loss_value
from .params import LumParams

BoolArray = npt.NDArray[np.bool_]

# f_P range: finite real or +/-inf, never NaN.
ExtendedReal = float


def _as_probability(eta: float | FloatArray) -> FloatArray:
    arr = np.asarray(eta, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("eta must lie in [0, 1]")
    return arr


def _as_margin(a: float | FloatArray, *, open_right: bool = False) -> FloatArray:
    arr = np.asarray(a, dtype=np.float64)
    if np.any(np.isnan(arr)) or np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("margin a must lie in [0, 1]")
    if open_right and np.any(arr == 1.0):
        raise ValueError("g'(a) diverges at a = 1")
    return arr


def _out(arr: npt.NDArray[np.generic]) -> float | FloatArray:
    return float(arr) if np.ndim(arr) == 0 else arr.astype(np.float64)


def sgn(values: float | FloatArray) -> float | FloatArray:
    """Sign with sgn(0) = +1."""
    out = np.where(np.asarray(values, dtype=np.float64) >= 0.0, 1.0, -1.0)
    return _out(out)


def bayes_rule(eta: float | FloatArray) -> float | FloatArray:
    """f_c(eta): +1 where eta >= 1/2, -1 otherwise."""
    arr = _as_probability(eta)
    return _out(np.where(arr >= 0.5, 1.0, -1.0))


@overload
def phi(params: LumParams, eta: float, t: float) -> float: ...
@overload
def phi(params: LumParams, eta: float | FloatArray, t: float | FloatArray) -> float | FloatArray: ...


def phi(params: LumParams, eta: float | FloatArray, t: float | FloatArray) -> float | FloatArray:
    """Phi(t) = eta V(t) + (1 - eta) V(-t); eta and t broadcast."""
    e = _as_probability(eta)
    tt = np.asarray(t, dtype=np.float64)
    out = e * loss_value(params, tt) + (1.0 - e) * loss_value(params, -tt)
    return _out(np.asarray(out))


def _abs_log_odds(e: FloatArray) -> FloatArray:
    with np.errstate(divide="ignore"):
        return np.abs(np.log(e) - np.log1p(-e))


@overload
def minimizer(params: LumParams, eta: float) -> ExtendedReal: ...
@overload
def minimizer(params: LumParams, eta: FloatArray) -> FloatArray: ...


def minimizer(params: LumParams, eta: float | FloatArray) -> ExtendedReal | FloatArray:
    """
    Closed-form minimizer f_P of Phi.

    finite q:  +/- [q R - q + p] / (1 + p),  R = (larger/smaller odds)^(1/(q+1))
    q = inf:   [ln(eta/(1-eta)) +/- p] / (1 + p)
    p = inf:   the Bayes rule f_c
    """
    e = _as_probability(eta)
    upper = e >= 0.5
    if params.is_hinge:
        return _out(np.where(upper, 1.0, -1.0))
    p = params.p.finite_value()
    lo = _abs_log_odds(e)
    if params.q.is_infinite:
        magnitude = (lo + p) / (1.0 + p)
    else:
        q = params.q.finite_value()
        with np.errstate(over="ignore"):
            magnitude = (q * np.expm1(lo / (q + 1.0)) + p) / (1.0 + p)
    return _out(np.where(upper, magnitude, -magnitude))


def _minimal_risk_at_margin(params: LumParams, a: FloatArray) -> FloatArray:
    if params.is_hinge:
        return 1.0 - a
    p = params.p.finite_value()
    interior = (a > 0.0) & (a < 1.0)
    # Placeholder margin keeps the masked-out endpoints finite.
    safe = np.where(interior, a, 0.5)
    log_odds = np.log1p(safe) - np.log1p(-safe)
    if params.q.is_infinite:
        value = 0.5 * (1.0 - safe) * (2.0 + log_odds / (p + 1.0))
    else:
        q = params.q.finite_value()
        shrink = np.exp(-(q / (q + 1.0)) * log_odds)
        first = (1.0 + safe) / (2.0 * (1.0 + p)) * shrink
        second = 0.5 * (1.0 - safe) * (1.0 + (q * np.expm1(log_odds / (q + 1.0)) + p) / (1.0 + p))
        value = first + second
    return np.where(interior, value, np.where(a >= 1.0, 0.0, 1.0))


@overload
def minimal_risk(params: LumParams, eta: float) -> float: ...
@overload
def minimal_risk(params: LumParams, eta: FloatArray) -> FloatArray: ...


def minimal_risk(params: LumParams, eta: float | FloatArray) -> float | FloatArray:
    """Phi(f_P(eta)) via the closed form in a = |2 eta - 1|, continuous on [0, 1]."""
    e = _as_probability(eta)
    return _out(_minimal_risk_at_margin(params, np.abs(2.0 * e - 1.0)))


@overload
def excess_at_zero(params: LumParams, a: float) -> float: ...
@overload
def excess_at_zero(params: LumParams, a: FloatArray) -> FloatArray: ...


def excess_at_zero(params: LumParams, a: float | FloatArray) -> float | FloatArray:
    """g(a) = Phi(0) - Phi(f_P) = 1 - minimal risk at eta = (1 + a)/2."""
    arr = _as_margin(a)
    return _out(1.0 - _minimal_risk_at_margin(params, arr))


@overload
def excess_derivative(params: LumParams, a: float) -> float: ...
@overload
def excess_derivative(params: LumParams, a: FloatArray) -> FloatArray: ...


def excess_derivative(params: LumParams, a: float | FloatArray) -> float | FloatArray:
    """
    g'(a) on [0, 1).

    finite q:
      1/2 + (p - q)/(2(p+1)) + q/(2(p+1)) ((1+a)/(1-a))^(1/(q+1))
          - 1/(2(p+1)) ((1-a)/(1+a))^(q/(q+1))
    q = inf:
      1 + ln((1+a)/(1-a)) / (2(p+1)) - 1/((p+1)(1+a))
    p = inf:
      1, since g(a) = a for the hinge.
    """
    arr = _as_margin(a, open_right=True)
    if params.is_hinge:
        return _out(np.ones_like(arr))
    p = params.p.finite_value()
    log_odds = np.log1p(arr) - np.log1p(-arr)
    if params.q.is_infinite:
        out = 1.0 + log_odds / (2.0 * (p + 1.0)) - 1.0 / ((p + 1.0) * (1.0 + arr))
    else:
        q = params.q.finite_value()
        rising = (p + q * np.expm1(log_odds / (q + 1.0))) / (2.0 * (p + 1.0))
        falling = np.exp(-(q / (q + 1.0)) * log_odds) / (2.0 * (p + 1.0))
        out = 0.5 + rising - falling
    return _out(out)


def lower_bound_coefficient(params: LumParams) -> tuple[float, int]:
    """(k, power) with g(a) >= k * a**power for the regime of ``params``."""
    if params.is_hinge:
        raise ValueError("no lower bound on g is defined for the hinge loss")
    p = params.p.finite_value()
    if p > 0.0:
        return p / (p + 1.0), 1
    if params.q.is_infinite:
        return 0.5, 2
    q = params.q.finite_value()
    return q / (q + 1.0) * 0.5 ** ((2.0 * q + 1.0) / (q + 1.0)), 2


@overload
def excess_lower_bound(params: LumParams, a: float) -> float: ...
@overload
def excess_lower_bound(params: LumParams, a: FloatArray) -> FloatArray: ...


def excess_lower_bound(params: LumParams, a: float | FloatArray) -> float | FloatArray:
    """
    Lower bound on g(a):
      (p/(p+1)) a                               0 < p < inf
      (q/(q+1)) (1/2)^((2q+1)/(q+1)) a^2        p = 0, q < inf
      a^2 / 2                                   p = 0, q = inf
    """
    arr = _as_margin(a)
    coefficient, power = lower_bound_coefficient(params)
    return _out(coefficient * arr**power)


@overload
def is_fisher_consistent(params: LumParams, eta: float) -> bool: ...
@overload
def is_fisher_consistent(params: LumParams, eta: FloatArray) -> BoolArray: ...


def is_fisher_consistent(params: LumParams, eta: float | FloatArray) -> bool | BoolArray:
    """True where sgn(f_P(eta)) agrees with the Bayes rule f_c(eta)."""
    e = _as_probability(eta)
    fp = np.asarray(minimizer(params, e))
    agrees = np.where(fp >= 0.0, 1.0, -1.0) == np.where(e >= 0.5, 1.0, -1.0)
    return bool(agrees) if np.ndim(agrees) == 0 else agrees
