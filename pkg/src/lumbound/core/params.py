from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum


class Regime(str, Enum):
    """
    Which branch of the LUM family a parameter pair selects.

    P_POSITIVE:
      0 < p < inf; linear comparison bound with constant (p+1)/p.
    P_ZERO_FINITE_Q:
      p = 0, q < inf; square-root comparison bound.
    P_ZERO_Q_INF:
      p = 0, q = inf; square-root bound with constant sqrt(2).
    HINGE:
      p = inf; the hinge loss (1 - t)_+ regardless of q.
    """

    P_POSITIVE = "p_positive"
    P_ZERO_FINITE_Q = "p_zero_finite_q"
    P_ZERO_Q_INF = "p_zero_q_inf"
    HINGE = "hinge"


_INFINITY_TOKENS = frozenset({"inf", "+inf", "infinity", "+infinity", "∞"})


@dataclass(frozen=True, slots=True)
class ExtendedParam:
    """
    A nonnegative real or +infinity.

    ``value`` is None for the infinite variant; infinity is never stored as a
    float so evaluation code has to branch on ``is_infinite`` explicitly.
    """

    value: float | None

    def __post_init__(self) -> None:
        if self.value is None:
            return
        v = float(self.value)
        if not math.isfinite(v):
            raise ValueError("use ExtendedParam.infinity() for infinite values")
        if v < 0:
            raise ValueError(f"extended parameter must be >= 0, got {v}")
        object.__setattr__(self, "value", v)

    @classmethod
    def infinity(cls) -> ExtendedParam:
        return cls(None)

    @classmethod
    def finite(cls, value: float) -> ExtendedParam:
        return cls(float(value))

    @classmethod
    def parse(cls, raw: ExtendedParam | float | int | str) -> ExtendedParam:
        """Accept a number, an existing param, or strings like "2.5" / "inf"."""
        if isinstance(raw, ExtendedParam):
            return raw
        if isinstance(raw, str):
            token = raw.strip().lower()
            if token in _INFINITY_TOKENS:
                return cls.infinity()
            try:
                number = float(token)
            except ValueError as e:
                raise ValueError(f"cannot parse extended parameter from {raw!r}") from e
        else:
            number = float(raw)
        if math.isinf(number) and number > 0:
            return cls.infinity()
        return cls(number)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def finite_value(self) -> float:
        """The finite value; raises for the infinite variant."""
        if self.value is None:
            raise ValueError("parameter is infinite")
        return self.value

    def to_json(self) -> float | str:
        return "inf" if self.value is None else self.value

    def __str__(self) -> str:
        return "inf" if self.value is None else format(self.value, "g")


INF = ExtendedParam.infinity()


@dataclass(frozen=True, slots=True)
class LumParams:
    """
    The (p, q) pair selecting a member of the LUM loss family.

    p ranges over [0, inf] and q over (0, inf]. When p is infinite the loss is
    the hinge loss and q is kept only for reporting.
    """

    p: ExtendedParam
    q: ExtendedParam

    def __post_init__(self) -> None:
        if not isinstance(self.p, ExtendedParam) or not isinstance(self.q, ExtendedParam):
            raise TypeError("LumParams fields must be ExtendedParam; use LumParams.of(p, q)")
        if not self.q.is_infinite and self.q.finite_value() == 0.0:
            raise ValueError("q must be > 0")

    @classmethod
    def of(cls, p: ExtendedParam | float | int | str, q: ExtendedParam | float | int | str) -> LumParams:
        return cls(ExtendedParam.parse(p), ExtendedParam.parse(q))

    @classmethod
    def parse(cls, text: str) -> LumParams:
        """Inverse of ``str``: "p=1,q=inf" (spaces and key order are free)."""
        fields: dict[str, str] = {}
        for part in text.split(","):
            key, sep, value = part.partition("=")
            key = key.strip().lower()
            if not sep or key not in ("p", "q") or key in fields:
                raise ValueError(f"cannot parse loss parameters from {text!r}; expected \"p=<p>,q=<q>\"")
            fields[key] = value
        if set(fields) != {"p", "q"}:
            raise ValueError(f"cannot parse loss parameters from {text!r}; expected \"p=<p>,q=<q>\"")
        return cls.of(fields["p"], fields["q"])

    @classmethod
    def dwd(cls) -> LumParams:
        """Distance-weighted discrimination loss, p = q = 1."""
        return cls.of(1.0, 1.0)

    @classmethod
    def hinge(cls, q: float = 1.0) -> LumParams:
        return cls(INF, ExtendedParam.parse(q))

    @classmethod
    def hybrid_exponential(cls, p: float) -> LumParams:
        """Hinge/exponential hybrid, q = inf."""
        return cls(ExtendedParam.parse(p), INF)

    @property
    def is_hinge(self) -> bool:
        return self.p.is_infinite

    @property
    def regime(self) -> Regime:
        if self.p.is_infinite:
            return Regime.HINGE
        if self.p.finite_value() > 0.0:
            return Regime.P_POSITIVE
        return Regime.P_ZERO_Q_INF if self.q.is_infinite else Regime.P_ZERO_FINITE_Q

    def to_json(self) -> dict[str, float | str]:
        return {"p": self.p.to_json(), "q": self.q.to_json()}

    @classmethod
    def from_json(cls, raw: dict[str, float | str]) -> LumParams:
        try:
            return cls.of(raw["p"], raw["q"])
        except KeyError as e:
            raise ValueError(f"params record is missing {e.args[0]!r}") from e

    def __str__(self) -> str:
        return f"p={self.p},q={self.q}"
