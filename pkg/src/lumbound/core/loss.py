"""LUM loss V(t; p, q) and its first derivative.

Evaluation dispatches on (p finite?, q finite?) into four code paths:

  p = inf            hinge (1 - t)_+
  p < inf, q < inf   1 - t below the kink, power tail above it
  p < inf, q = inf   1 - t below the kink, exponential tail above it

All functions accept a float or a numpy array for ``t`` and return the same
kind. Tails are evaluated on arguments clamped to the kink so masked-out
branches never produce overflow or NaN.
"""

from __future__ import annotations

from typing import overload

import numpy as np
import numpy.typing as npt

from .params import LumParams

FloatArray = npt.NDArray[np.float64]

# Above this q the power tail switches to exp(-q * log1p(u / q)).
LOG_DOMAIN_Q = 50.0


def kink_point(params: LumParams) -> float:
    """Point where V leaves the linear branch: p/(1+p), or 1 for the hinge."""
    if params.p.is_infinite:
        return 1.0
    p = params.p.finite_value()
    return p / (1.0 + p)


def _as_array(t: float | FloatArray) -> FloatArray:
    arr = np.asarray(t, dtype=np.float64)
    if not np.all(np.isfinite(arr)):
        raise ValueError("loss arguments must be finite")
    return arr


def _tail_power(q: float, u: FloatArray, exponent: float) -> FloatArray:
    """(q / ((1+p)t - p + q)) ** exponent for u = (1+p)t - p >= 0."""
    if q > LOG_DOMAIN_Q:
        return np.exp(-exponent * np.log1p(u / q))
    return (q / (u + q)) ** exponent


@overload
def loss_value(params: LumParams, t: float) -> float: ...
@overload
def loss_value(params: LumParams, t: FloatArray) -> FloatArray: ...


def loss_value(params: LumParams, t: float | FloatArray) -> float | FloatArray:
    arr = _as_array(t)
    if params.p.is_infinite:
        out = np.maximum(1.0 - arr, 0.0)
    else:
        p = params.p.finite_value()
        kink = p / (1.0 + p)
        above = arr >= kink
        u = (1.0 + p) * np.maximum(arr, kink) - p
        if params.q.is_infinite:
            tail = np.exp(-u) / (1.0 + p)
        else:
            q = params.q.finite_value()
            tail = _tail_power(q, u, q) / (1.0 + p)
        out = np.where(above, tail, 1.0 - arr)
    return float(out) if np.ndim(out) == 0 else out


@overload
def loss_derivative(params: LumParams, t: float) -> float: ...
@overload
def loss_derivative(params: LumParams, t: FloatArray) -> FloatArray: ...


def loss_derivative(params: LumParams, t: float | FloatArray) -> float | FloatArray:
    """
    dV/dt. At the kink both one-sided derivatives are -1 and -1 is returned;
    for the hinge the subgradient 0 is used at t = 1.
    """
    arr = _as_array(t)
    if params.p.is_infinite:
        out = np.where(arr < 1.0, -1.0, 0.0)
    else:
        p = params.p.finite_value()
        kink = p / (1.0 + p)
        above = arr > kink
        u = (1.0 + p) * np.maximum(arr, kink) - p
        if params.q.is_infinite:
            tail = -np.exp(-u)
        else:
            q = params.q.finite_value()
            tail = -_tail_power(q, u, q + 1.0)
        out = np.where(above, tail, -1.0)
    return float(out) if np.ndim(out) == 0 else out
