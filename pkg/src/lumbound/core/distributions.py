"""Finite-support joint distributions with known eta, and samples drawn from them."""

from __future__ import annotations

import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass

import numpy as np
import numpy.typing as npt

from ..observability.logging import get_logger
from ..utils.seeding import make_rng
from .loss import FloatArray

IntArray = npt.NDArray[np.int64]

WEIGHT_SUM_TOLERANCE = 1e-12

EtaSpec = Callable[[FloatArray], FloatArray] | Sequence[float] | FloatArray
WeightSpec = Callable[[FloatArray], FloatArray] | Sequence[float] | FloatArray | None


def _frozen(arr: npt.NDArray[np.generic]) -> npt.NDArray[np.generic]:
    arr = np.array(arr, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class DiscreteJoint:
    """
    Joint distribution P on X x {-1, +1} with finitely many atoms.

    Attributes:
      atoms:   (n, d) feature points.
      weights: (n,) marginal probabilities P_X({x_i}); nonnegative, sum to 1.
      etas:    (n,) conditional probabilities eta(x_i) = P(y = 1 | x_i).

    Arrays are copied and made read-only at construction.
    """

    atoms: FloatArray
    weights: FloatArray
    etas: FloatArray

    def __post_init__(self) -> None:
        atoms = np.asarray(self.atoms, dtype=np.float64)
        if atoms.ndim == 1:
            atoms = atoms.reshape(-1, 1)
        weights = np.asarray(self.weights, dtype=np.float64).reshape(-1)
        etas = np.asarray(self.etas, dtype=np.float64).reshape(-1)
        if atoms.ndim != 2 or atoms.shape[1] < 1:
            raise ValueError(f"atoms must be an (n, d) array with d >= 1, got shape {atoms.shape}")
        n = atoms.shape[0]
        if n < 1:
            raise ValueError("a distribution needs at least one atom")
        if weights.shape[0] != n or etas.shape[0] != n:
            raise ValueError(
                f"atoms, weights and etas must have equal length, got {n}, {weights.shape[0]}, {etas.shape[0]}"
            )
        if not (np.all(np.isfinite(atoms)) and np.all(np.isfinite(weights))):
            raise ValueError("atoms and weights must be finite")
        if np.any(weights < 0.0):
            raise ValueError("weights must be nonnegative")
        total = math.fsum(weights.tolist())
        if abs(total - 1.0) > WEIGHT_SUM_TOLERANCE:
            raise ValueError(f"weights must sum to 1, got {total!r}")
        if np.any(np.isnan(etas)) or np.any(etas < 0.0) or np.any(etas > 1.0):
            raise ValueError("etas must lie in [0, 1]")
        object.__setattr__(self, "atoms", _frozen(atoms))
        object.__setattr__(self, "weights", _frozen(weights))
        object.__setattr__(self, "etas", _frozen(etas))

    @property
    def n_atoms(self) -> int:
        return int(self.atoms.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.atoms.shape[1])

    def margins(self) -> FloatArray:
        """|2 eta - 1| per atom."""
        return np.abs(2.0 * self.etas - 1.0)

    @classmethod
    def normalized(cls, atoms: FloatArray, weights: FloatArray, etas: FloatArray) -> DiscreteJoint:
        """Build from unnormalized nonnegative weights."""
        w = np.asarray(weights, dtype=np.float64).reshape(-1)
        if np.any(w < 0.0) or not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite and nonnegative")
        total = math.fsum(w.tolist())
        if total <= 0.0:
            raise ValueError("weights must have positive total mass")
        return cls(atoms=atoms, weights=w / total, etas=etas)


@dataclass(frozen=True, eq=False)
class SampleSet:
    """n labelled samples: an (n, d) feature matrix and labels in {-1, +1}."""

    features: FloatArray
    labels: FloatArray

    def __post_init__(self) -> None:
        features = np.asarray(self.features, dtype=np.float64)
        if features.ndim == 1:
            features = features.reshape(-1, 1)
        labels = np.asarray(self.labels, dtype=np.float64).reshape(-1)
        if features.ndim != 2:
            raise ValueError(f"features must be a 2-D array, got shape {features.shape}")
        if features.shape[0] != labels.shape[0]:
            raise ValueError(
                f"feature rows ({features.shape[0]}) must match label count ({labels.shape[0]})"
            )
        if not np.all(np.isin(labels, (-1.0, 1.0))):
            raise ValueError("labels must be -1 or +1")
        if not np.all(np.isfinite(features)):
            raise ValueError("features must be finite")
        object.__setattr__(self, "features", _frozen(features))
        object.__setattr__(self, "labels", _frozen(labels))

    @property
    def n_samples(self) -> int:
        return int(self.features.shape[0])

    @property
    def dimension(self) -> int:
        return int(self.features.shape[1])


def _resolve_spec(spec: EtaSpec | WeightSpec, grid: FloatArray, what: str) -> FloatArray:
    if callable(spec):
        values = np.asarray(spec(grid), dtype=np.float64)
        if values.ndim == 0:
            values = np.full(grid.shape, float(values))
    else:
        values = np.asarray(spec, dtype=np.float64).reshape(-1)
    if values.shape != grid.shape:
        raise ValueError(f"{what} spec produced {values.shape[0]} values for {grid.shape[0]} atoms")
    return values


def grid_points(n_atoms: int) -> FloatArray:
    """n_atoms equally spaced points on [0, 1]; a single atom sits at 0."""
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    if n_atoms == 1:
        return np.zeros(1)
    return np.arange(n_atoms, dtype=np.float64) / (n_atoms - 1)


def make_grid_distribution(n_atoms: int, eta_spec: EtaSpec, weight_spec: WeightSpec = None) -> DiscreteJoint:
    """
    DiscreteJoint over a 1-D grid on [0, 1].

    ``eta_spec`` and ``weight_spec`` are either callables evaluated on the grid
    or tables with one entry per atom. Weights default to uniform and are
    normalized; negative weights or eta outside [0, 1] are rejected.
    """
    grid = grid_points(n_atoms)
    etas = _resolve_spec(eta_spec, grid, "eta")
    if weight_spec is None:
        weights = np.ones_like(grid)
    else:
        weights = _resolve_spec(weight_spec, grid, "weight")
    return DiscreteJoint.normalized(atoms=grid.reshape(-1, 1), weights=weights, etas=etas)


def _check_noise_params(tau: float, c_tau: float) -> None:
    if not (math.isfinite(tau) and tau > 0.0):
        raise ValueError(f"tau must be a finite positive number, got {tau}")
    if not (math.isfinite(c_tau) and c_tau > 0.0):
        raise ValueError(f"c_tau must be a finite positive number, got {c_tau}")
    if c_tau > 1.0:
        raise ValueError(f"c_tau must be <= 1 so that eta stays in [0, 1], got {c_tau}")


def tsybakov_eta(x: float | FloatArray, tau: float, c_tau: float) -> float | FloatArray:
    """eta(x) = (1 + c_tau x^(1/tau)) / 2 for x in [0, 1]."""
    _check_noise_params(tau, c_tau)
    arr = np.asarray(x, dtype=np.float64)
    if np.any(arr < 0.0) or np.any(arr > 1.0):
        raise ValueError("x must lie in [0, 1]")
    out = 0.5 * (1.0 + c_tau * arr ** (1.0 / tau))
    return float(out) if np.ndim(out) == 0 else out


def make_tsybakov_distribution(tau: float, c_tau: float, n_atoms: int) -> DiscreteJoint:
    """
    Uniform atoms x_i = i/n (i = 1..n) with |2 eta - 1| = c_tau x^(1/tau).

    P_X(|2 eta - 1| <= c_tau t) = floor(n t^tau)/n <= t^tau for every t > 0,
    so the noise condition holds with exponent tau and constant c_tau.
    """
    _check_noise_params(tau, c_tau)
    if n_atoms < 1:
        raise ValueError(f"n_atoms must be >= 1, got {n_atoms}")
    x = np.arange(1, n_atoms + 1, dtype=np.float64) / n_atoms
    etas = np.asarray(tsybakov_eta(x, tau, c_tau))
    weights = np.full(n_atoms, 1.0 / n_atoms)
    return DiscreteJoint.normalized(atoms=x.reshape(-1, 1), weights=weights, etas=etas)


@dataclass(frozen=True, slots=True)
class TsybakovReport:
    """
    Outcome of checking P_X(|2 eta - 1| <= c_tau t) <= t^tau on a grid of t.

    max_violation is the largest mass - t^tau seen (negative when every t has
    room to spare); slack is the one-atom allowance applied to ``passed``.
    """

    max_violation: float
    worst_t: float
    slack: float
    passed: bool


DEFAULT_T_GRID: tuple[float, ...] = tuple(round(0.05 * k, 2) for k in range(1, 20))


def check_tsybakov(
    dist: DiscreteJoint,
    tau: float,
    c_tau: float,
    t_grid: Sequence[float] = DEFAULT_T_GRID,
) -> TsybakovReport:
    if len(t_grid) == 0:
        raise ValueError("t_grid must not be empty")
    ts = np.asarray(t_grid, dtype=np.float64)
    if np.any(ts <= 0.0):
        raise ValueError("t_grid values must be > 0")
    margins = dist.margins()
    weights = dist.weights
    slack = float(np.max(weights))
    worst_t = float(ts[0])
    max_violation = -math.inf
    for t in ts:
        mass = math.fsum(weights[margins <= c_tau * t].tolist())
        violation = mass - float(t) ** tau
        if violation > max_violation:
            max_violation, worst_t = violation, float(t)
    passed = max_violation <= slack
    if not passed:
        get_logger().debug(
            "tsybakov.violation",
            "noise condition fails beyond one-atom slack",
            tau=tau,
            c_tau=c_tau,
            t=worst_t,
            violation=max_violation,
        )
    return TsybakovReport(max_violation=max_violation, worst_t=worst_t, slack=slack, passed=passed)


def sample_from(dist: DiscreteJoint, n: int, seed: int) -> SampleSet:
    """n i.i.d. draws: atom by weight, then y = +1 with probability eta at that atom."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    rng = make_rng(seed)
    index: IntArray = rng.choice(dist.n_atoms, size=n, p=dist.weights)
    draws = rng.random(n)
    labels = np.where(draws < dist.etas[index], 1.0, -1.0)
    return SampleSet(features=dist.atoms[index], labels=labels)


def make_hdlss_gaussians(d: int, n_per_class: int, mean_separation: float, seed: int) -> SampleSet:
    """
    Two isotropic unit-variance Gaussian clouds at +/-(mean_separation/2) e_1.

    Rows are the n_per_class positives followed by the n_per_class negatives.
    """
    if d < 1:
        raise ValueError(f"d must be >= 1, got {d}")
    if n_per_class < 2:
        raise ValueError(f"n_per_class must be >= 2, got {n_per_class}")
    rng = make_rng(seed)
    features = rng.standard_normal((2 * n_per_class, d))
    labels = np.concatenate([np.ones(n_per_class), -np.ones(n_per_class)])
    features[:, 0] += labels * (mean_separation / 2.0)
    return SampleSet(features=features, labels=labels)
