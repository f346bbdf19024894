"""Closed-form real functions whose graphs are tested against a base domain.

Every handle is written as ``level + deviation(t)``.  Containment checks work
with ordinates measured from the domain's mid-line, and keeping the constant
``level`` separate lets that shift happen exactly before any rounding of the
(possibly tiny) deviation enters.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any

from . import interval as iv
from .interval import Interval


class GraphFunction:
    """Base class: ``t -> level + deviation(t)``."""

    level: float

    def value(self, t: float) -> float:
        return self.level + self.deviation_value(t)

    def deviation_value(self, t: float) -> float:
        raise NotImplementedError

    def deviation(self, t: Interval) -> Interval:
        """Enclosure of ``{gamma(s) - level : s in t}``."""
        raise NotImplementedError

    def witness(self, x: Interval, region: Interval) -> Interval | None:
        """An enclosure inside ``region`` of the deviation at the (unknown) exact ``x``."""
        e = self.deviation(x)
        return e if region.contains(e) else None

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError


@dataclass(frozen=True)
class Constant(GraphFunction):
    level: float

    def deviation_value(self, t: float) -> float:
        return 0.0

    def deviation(self, t: Interval) -> Interval:
        return Interval(0.0, 0.0)

    def to_dict(self) -> dict[str, Any]:
        return {"type": "constant", "level": self.level}


@dataclass(frozen=True)
class Affine(GraphFunction):
    """``t -> c*t + d``; ``d`` doubles as the level."""

    c: float
    d: float

    @property
    def level(self) -> float:  # type: ignore[override]
        return self.d

    def deviation_value(self, t: float) -> float:
        return self.c * t

    def deviation(self, t: Interval) -> Interval:
        return t * self.c

    def to_dict(self) -> dict[str, Any]:
        return {"type": "affine", "c": self.c, "d": self.d}


@dataclass(frozen=True)
class TrigPolynomial(GraphFunction):
    """``level + const + sum_j (sin_coeffs[j-1] sin(j t) + cos_coeffs[j-1] cos(j t))``."""

    level: float
    sin_coeffs: tuple[float, ...] = ()
    cos_coeffs: tuple[float, ...] = ()
    const: float = 0.0

    @property
    def degree(self) -> int:
        return max(len(self.sin_coeffs), len(self.cos_coeffs))

    @property
    def l1_norm(self) -> float:
        return abs(self.const) + sum(map(abs, self.sin_coeffs)) + sum(map(abs, self.cos_coeffs))

    def deviation_value(self, t: float) -> float:
        v = self.const
        for j, a in enumerate(self.sin_coeffs, start=1):
            if a:
                v += a * math.sin(j * t)
        for j, b in enumerate(self.cos_coeffs, start=1):
            if b:
                v += b * math.cos(j * t)
        return v

    def deviation(self, t: Interval) -> Interval:
        acc = Interval.point(self.const)
        for j, a in enumerate(self.sin_coeffs, start=1):
            if a:
                acc = acc + iv.sin(t * j) * a
        for j, b in enumerate(self.cos_coeffs, start=1):
            if b:
                acc = acc + iv.cos(t * j) * b
        return acc

    def sup_abs_deviation(self) -> float:
        """Upper bound for ``|gamma - level|`` on the whole line (coefficient l1 norm, rounded up)."""
        total = 0.0
        for c in (self.const, *self.sin_coeffs, *self.cos_coeffs):
            total = iv.add_up(total, abs(c))
        return total

    def to_dict(self) -> dict[str, Any]:
        return {
            "type": "trig",
            "level": self.level,
            "const": self.const,
            "sin": list(self.sin_coeffs),
            "cos": list(self.cos_coeffs),
        }


def scaled_sine(amplitude: float, level: float) -> TrigPolynomial:
    return TrigPolynomial(level=level, sin_coeffs=(amplitude,))


def function_from_dict(data: dict[str, Any]) -> GraphFunction:
    kind = data.get("type")
    if kind == "constant":
        return Constant(float(data["level"]))
    if kind == "affine":
        return Affine(float(data["c"]), float(data["d"]))
    if kind == "trig":
        return TrigPolynomial(
            level=float(data["level"]),
            sin_coeffs=tuple(float(v) for v in data.get("sin", ())),
            cos_coeffs=tuple(float(v) for v in data.get("cos", ())),
            const=float(data.get("const", 0.0)),
        )
    raise ValueError(f"unknown function type {kind!r}")
