from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..core.loss import FloatArray
from ..core.risk import LinearScore


@dataclass(frozen=True, eq=False)
class LinearModel:
    """Linear score f(x) = w.x + b."""

    w: FloatArray
    b: float = 0.0

    def __post_init__(self) -> None:
        w = np.array(self.w, dtype=np.float64).reshape(-1)
        if w.shape[0] < 1:
            raise ValueError("w must have at least one entry")
        if not (np.all(np.isfinite(w)) and math.isfinite(self.b)):
            raise ValueError("model coefficients must be finite")
        w.setflags(write=False)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "b", float(self.b))

    @classmethod
    def zeros(cls, dimension: int) -> LinearModel:
        return cls(np.zeros(dimension), 0.0)

    @property
    def dimension(self) -> int:
        return int(self.w.shape[0])

    def scores(self, features: FloatArray) -> FloatArray:
        x = np.asarray(features, dtype=np.float64)
        if x.ndim == 1:
            x = x.reshape(1, -1)
        if x.ndim != 2 or x.shape[1] != self.dimension:
            raise ValueError(f"features have {x.shape[-1]} columns, model expects {self.dimension}")
        return x @ self.w + self.b

    def as_score(self) -> LinearScore:
        return LinearScore(self.w, self.b)

    def to_json(self) -> dict[str, object]:
        return {"w": self.w.tolist(), "b": self.b}

    @classmethod
    def from_json(cls, raw: dict[str, object]) -> LinearModel:
        try:
            w, b = raw["w"], raw["b"]
        except KeyError as e:
            raise ValueError(f"model record is missing {e.args[0]!r}") from e
        if not isinstance(w, list) or not isinstance(b, int | float):
            raise ValueError("model record needs a list 'w' and a number 'b'")
        return cls(np.asarray(w, dtype=np.float64), float(b))


def predict(model: LinearModel, features: FloatArray) -> tuple[FloatArray, FloatArray]:
    """Scores Xw + b and labels sgn(scores), with sgn(0) = +1."""
    scores = model.scores(features)
    return scores, np.where(scores >= 0.0, 1.0, -1.0)
