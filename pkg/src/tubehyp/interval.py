"""Closed real intervals with directed (outward) rounding.

Basic arithmetic uses error-free transformations (TwoSum, Dekker's
TwoProduct) to decide the rounding direction of each float result, so an
operation whose float result is exact does not get widened.  Elementary
functions are evaluated with libm and widened by two ulps on each side, then
range-analysed (critical points of sin/cos/cosh are located with a rigorous
enclosure of pi).
"""

from __future__ import annotations

import math
import sys
from dataclasses import dataclass
from typing import Iterable, Union

Number = Union[int, float]

_INF = math.inf
_SPLITTER = 134217729.0  # 2**27 + 1
# Below/above these magnitudes the error-free transforms are unreliable.
_TINY = 2.0**-960
_HUGE = 2.0**995


def _down(x: float) -> float:
    return math.nextafter(x, -_INF)


def _up(x: float) -> float:
    return math.nextafter(x, _INF)


def _two_sum(a: float, b: float) -> tuple[float, float]:
    s = a + b
    bp = s - a
    ap = s - bp
    return s, (a - ap) + (b - bp)


def _split(a: float) -> tuple[float, float]:
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def _two_prod(a: float, b: float) -> tuple[float, float]:
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def _safe(x: float) -> bool:
    ax = abs(x)
    return ax == 0.0 or (_TINY < ax < _HUGE)


def add_down(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if s == _INF and math.isfinite(a) and math.isfinite(b):
        return sys.float_info.max
    if not math.isfinite(s):
        return s
    return _down(s) if e < 0 else s


def add_up(a: float, b: float) -> float:
    s, e = _two_sum(a, b)
    if s == -_INF and math.isfinite(a) and math.isfinite(b):
        return -sys.float_info.max
    if not math.isfinite(s):
        return s
    return _up(s) if e > 0 else s


def _fallback(r: float, a: float, b: float, up: bool) -> float:
    """Outward step for results outside the error-free range (underflow, overflow, tiny inputs)."""
    if math.isinf(r) and math.isfinite(a) and math.isfinite(b):
        # a finite exact value overflowed
        if up:
            return r if r > 0 else -sys.float_info.max
        return r if r < 0 else sys.float_info.max
    if not math.isfinite(r):
        return r
    if r == 0.0 and a != 0.0 and b != 0.0:
        # underflow: the exact sign is known, so one side stays at zero
        positive = (a > 0) == (b > 0)
        if positive:
            return _up(0.0) if up else 0.0
        return 0.0 if up else _down(0.0)
    return _up(r) if up else _down(r)


def _exact_range(r: float) -> bool:
    return _TINY < abs(r) < _HUGE


def mul_down(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not (_safe(a) and _safe(b) and _exact_range(p)):
        return _fallback(p, a, b, up=False)
    p, e = _two_prod(a, b)
    return _down(p) if e < 0 else p


def mul_up(a: float, b: float) -> float:
    if a == 0.0 or b == 0.0:
        return 0.0
    p = a * b
    if not (_safe(a) and _safe(b) and _exact_range(p)):
        return _fallback(p, a, b, up=True)
    p, e = _two_prod(a, b)
    return _up(p) if e > 0 else p


def _div_residual_sign(a: float, b: float, q: float) -> int:
    """Sign of (a/b - q) for the exact quotient a/b."""
    p, e = _two_prod(q, b)
    # a - q*b = (a - p) - e; a - p is exact when q is the rounded quotient
    r = (a - p) - e
    if r == 0.0:
        return 0
    return 1 if (r > 0) == (b > 0) else -1


def div_down(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    q = a / b
    if not (_safe(a) and _safe(b) and _exact_range(q)):
        return _fallback(q, a, b, up=False)
    return _down(q) if _div_residual_sign(a, b, q) < 0 else q


def div_up(a: float, b: float) -> float:
    if a == 0.0:
        return 0.0
    q = a / b
    if not (_safe(a) and _safe(b) and _exact_range(q)):
        return _fallback(q, a, b, up=True)
    return _up(q) if _div_residual_sign(a, b, q) > 0 else q


def sqrt_down(x: float) -> float:
    if x <= 0.0:
        return 0.0
    s = math.sqrt(x)
    if not _safe(s) or not _safe(x):
        return _down(s)
    p, e = _two_prod(s, s)
    # s*s - x = (p - x) + e
    return _down(s) if (p - x) + e > 0 else s


def sqrt_up(x: float) -> float:
    if x <= 0.0:
        return 0.0
    s = math.sqrt(x)
    if not _safe(s) or not _safe(x):
        return _up(s)
    p, e = _two_prod(s, s)
    return _up(s) if (p - x) + e < 0 else s


def _enc(fn, x: float) -> tuple[float, float]:
    """Bounds for ``fn(x)``; exact at zero, where sin, cos, exp, sinh and cosh are exact."""
    v = fn(x)
    return (v, v) if x == 0.0 else _widen(v)


def _widen(v: float, ulps: int = 2) -> tuple[float, float]:
    lo = hi = v
    for _ in range(ulps):
        lo, hi = _down(lo), _up(hi)
    return lo, hi


@dataclass(frozen=True, slots=True)
class Interval:
    """A closed interval ``[lo, hi]`` of reals."""

    lo: float
    hi: float

    def __post_init__(self) -> None:
        if math.isnan(self.lo) or math.isnan(self.hi):
            raise ValueError("interval endpoint is NaN")
        if self.lo > self.hi:
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def point(cls, x: Number) -> Interval:
        x = float(x)
        return cls(x, x)

    @classmethod
    def hull(cls, values: Iterable[Union[Number, "Interval"]]) -> Interval:
        lo, hi = _INF, -_INF
        for v in values:
            if isinstance(v, Interval):
                lo, hi = min(lo, v.lo), max(hi, v.hi)
            else:
                lo, hi = min(lo, float(v)), max(hi, float(v))
        return cls(lo, hi)

    # -- queries ---------------------------------------------------------

    @property
    def width(self) -> float:
        return add_up(self.hi, -self.lo)

    @property
    def mid(self) -> float:
        m = 0.5 * self.lo + 0.5 * self.hi
        return min(max(m, self.lo), self.hi)

    @property
    def mag(self) -> float:
        return max(abs(self.lo), abs(self.hi))

    @property
    def is_point(self) -> bool:
        return self.lo == self.hi

    def contains(self, x: Union[Number, "Interval"]) -> bool:
        if isinstance(x, Interval):
            return self.lo <= x.lo and x.hi <= self.hi
        return self.lo <= x <= self.hi

    def overlaps(self, other: Interval) -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: Interval) -> Interval | None:
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return Interval(lo, hi) if lo <= hi else None

    def strictly_inside(self, lo: float, hi: float) -> bool:
        """Whether every point lies in the open interval ``(lo, hi)``."""
        return lo < self.lo and self.hi < hi

    def bisect(self) -> tuple[Interval, Interval]:
        m = self.mid
        return Interval(self.lo, m), Interval(m, self.hi)

    def split(self, parts: int) -> list[Interval]:
        edges = [self.lo + (self.hi - self.lo) * i / parts for i in range(parts + 1)]
        edges[0], edges[-1] = self.lo, self.hi
        return [Interval(edges[i], edges[i + 1]) for i in range(parts)]

    # -- arithmetic ------------------------------------------------------

    def __neg__(self) -> Interval:
        return Interval(-self.hi, -self.lo)

    def __add__(self, other: Union[Number, Interval]) -> Interval:
        o = _coerce(other)
        return Interval(add_down(self.lo, o.lo), add_up(self.hi, o.hi))

    __radd__ = __add__

    def __sub__(self, other: Union[Number, Interval]) -> Interval:
        o = _coerce(other)
        return Interval(add_down(self.lo, -o.hi), add_up(self.hi, -o.lo))

    def __rsub__(self, other: Union[Number, Interval]) -> Interval:
        return _coerce(other) - self

    def __mul__(self, other: Union[Number, Interval]) -> Interval:
        o = _coerce(other)
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lows = (mul_down(a, c), mul_down(a, d), mul_down(b, c), mul_down(b, d))
        highs = (mul_up(a, c), mul_up(a, d), mul_up(b, c), mul_up(b, d))
        return Interval(min(lows), max(highs))

    __rmul__ = __mul__

    def __truediv__(self, other: Union[Number, Interval]) -> Interval:
        o = _coerce(other)
        if o.lo <= 0.0 <= o.hi:
            raise ZeroDivisionError("interval division by an interval containing 0")
        a, b, c, d = self.lo, self.hi, o.lo, o.hi
        lows = (div_down(a, c), div_down(a, d), div_down(b, c), div_down(b, d))
        highs = (div_up(a, c), div_up(a, d), div_up(b, c), div_up(b, d))
        return Interval(min(lows), max(highs))

    def __rtruediv__(self, other: Union[Number, Interval]) -> Interval:
        return _coerce(other) / self

    def sqr(self) -> Interval:
        if self.lo >= 0.0:
            return Interval(mul_down(self.lo, self.lo), mul_up(self.hi, self.hi))
        if self.hi <= 0.0:
            return Interval(mul_down(self.hi, self.hi), mul_up(self.lo, self.lo))
        m = self.mag
        return Interval(0.0, mul_up(m, m))

    def __abs__(self) -> Interval:
        if self.lo >= 0.0:
            return self
        if self.hi <= 0.0:
            return -self
        return Interval(0.0, self.mag)

    def clamp(self, lo: float, hi: float) -> Interval:
        """Intersect with ``[lo, hi]`` when the function's true range is known to lie there."""
        return Interval(min(max(self.lo, lo), hi), max(min(self.hi, hi), lo))

    def __repr__(self) -> str:
        return f"Interval({self.lo!r}, {self.hi!r})"


def _coerce(x: Union[Number, Interval]) -> Interval:
    if isinstance(x, Interval):
        return x
    return Interval.point(x)


PI = Interval(math.pi, _up(math.pi))
HALF_PI = PI * 0.5
TWO_PI = PI * 2.0


def pi_multiple(num: int, den: int = 1) -> Interval:
    """Enclosure of ``num/den * pi``."""
    return PI * num / float(den) if den != 1 else PI * num


def _contains_lattice(x: Interval, offset: Interval, period: Interval) -> bool:
    """Whether ``x`` may contain a point ``offset + m*period`` for an integer ``m``."""
    m_lo = math.floor((x.lo - offset.hi) / period.lo) - 1
    m_hi = math.ceil((x.hi - offset.lo) / period.lo) + 1
    for m in range(m_lo, m_hi + 1):
        if x.overlaps(offset + period * m):
            return True
    return False


def sin(x: Union[Number, Interval]) -> Interval:
    x = _coerce(x)
    if x.hi - x.lo >= TWO_PI.lo:
        return Interval(-1.0, 1.0)
    a_lo, a_hi = _enc(math.sin, x.lo)
    b_lo, b_hi = _enc(math.sin, x.hi)
    lo, hi = min(a_lo, b_lo), max(a_hi, b_hi)
    if _contains_lattice(x, HALF_PI, TWO_PI):
        hi = 1.0
    if _contains_lattice(x, -HALF_PI, TWO_PI):
        lo = -1.0
    return Interval(lo, hi).clamp(-1.0, 1.0)


def cos(x: Union[Number, Interval]) -> Interval:
    x = _coerce(x)
    if x.hi - x.lo >= TWO_PI.lo:
        return Interval(-1.0, 1.0)
    a_lo, a_hi = _enc(math.cos, x.lo)
    b_lo, b_hi = _enc(math.cos, x.hi)
    lo, hi = min(a_lo, b_lo), max(a_hi, b_hi)
    if _contains_lattice(x, Interval.point(0.0), TWO_PI):
        hi = 1.0
    if _contains_lattice(x, PI, TWO_PI):
        lo = -1.0
    return Interval(lo, hi).clamp(-1.0, 1.0)


def exp(x: Union[Number, Interval]) -> Interval:
    x = _coerce(x)
    lo = _enc(math.exp, x.lo)[0] if x.lo > -745.0 else 0.0
    hi = _enc(math.exp, x.hi)[1] if x.hi < 709.0 else _INF
    return Interval(max(lo, 0.0), hi)


def sinh(x: Union[Number, Interval]) -> Interval:
    x = _coerce(x)
    lo = _enc(math.sinh, x.lo)[0] if x.lo > -710.0 else -_INF
    hi = _enc(math.sinh, x.hi)[1] if x.hi < 710.0 else _INF
    return Interval(lo, hi)


def cosh(x: Union[Number, Interval]) -> Interval:
    ax = abs(_coerce(x))
    lo = _enc(math.cosh, ax.lo)[0] if ax.lo < 710.0 else _INF
    hi = _enc(math.cosh, ax.hi)[1] if ax.hi < 710.0 else _INF
    if lo == _INF:
        lo = _HUGE
    return Interval(max(lo, 1.0), hi)


def sech(x: Union[Number, Interval]) -> Interval:
    """``1/cosh`` via ``2 e^{-|x|} / (1 + e^{-2|x|})``; no overflow for large arguments."""
    ax = abs(_coerce(x))
    num = exp(-ax) * 2.0
    den = exp(ax * -2.0) + 1.0
    return (num / den).clamp(0.0, 1.0)


def sqrt(x: Union[Number, Interval]) -> Interval:
    x = _coerce(x)
    if x.hi < 0.0:
        raise ValueError("sqrt of a negative interval")
    return Interval(sqrt_down(max(x.lo, 0.0)), sqrt_up(x.hi))
