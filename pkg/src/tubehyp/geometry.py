"""Planar base domains: a horizontal strip minus closed slits and smooth teeth.

All containment answers are one-sided.  ``Inside`` is only returned with an
interval proof; ``NotInside`` only with a point of the complement that is
proved to lie in the queried set.  Vertical quantities are compared relative
to the domain's mid-line so that offsets far below one ulp of the mid-line
value (``sech(50)`` is about ``4e-22``) still separate a set from an obstacle
touching the mid-line.
"""

from __future__ import annotations

import enum
import math
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Protocol, Sequence, Union

import numpy as np

from . import interval as iv
from .functions import Constant, GraphFunction
from .interval import Interval

DEFAULT_DEPTH = 40
DEFAULT_MIN_WIDTH = 1e-12
DEFAULT_CONNECTIVITY_RESOLUTION = 1e-2


class GeometryError(ValueError):
    """A domain description violates a structural or validation requirement."""


class Containment(str, enum.Enum):
    INSIDE = "Inside"
    NOT_INSIDE = "NotInside"
    UNKNOWN = "Unknown"


class EnvelopeCase(str, enum.Enum):
    CASE_I = "CaseI"
    CASE_II = "CaseII"


# -- abscissae given as exact expressions ---------------------------------

_PI_EXPR = re.compile(
    r"^\s*(?P<sign>[+-]?)\s*(?:(?P<num>\d+)\s*(?:/\s*(?P<den>\d+))?\s*\*\s*)?pi\s*(?:/\s*(?P<den2>\d+))?\s*$"
)


@dataclass(frozen=True)
class Abscissa:
    """An exact real given either as a float or as a rational multiple of pi."""

    enclosure: Interval
    expr: str

    @property
    def value(self) -> float:
        return self.enclosure.mid

    @classmethod
    def parse(cls, raw: Union[str, int, float, "Abscissa"]) -> Abscissa:
        if isinstance(raw, Abscissa):
            return raw
        if isinstance(raw, (int, float)) and not isinstance(raw, bool):
            x = float(raw)
            if not math.isfinite(x):
                raise GeometryError(f"abscissa must be finite, got {raw!r}")
            return cls(Interval.point(x), repr(x))
        if not isinstance(raw, str):
            raise GeometryError(f"cannot read abscissa from {raw!r}")
        m = _PI_EXPR.match(raw)
        if m is None:
            try:
                return cls.parse(float(raw))
            except ValueError:
                raise GeometryError(f"cannot read abscissa from {raw!r}") from None
        num = int(m["num"]) if m["num"] else 1
        den = int(m["den"]) if m["den"] else 1
        if m["den2"]:
            den *= int(m["den2"])
        if den == 0:
            raise GeometryError(f"zero denominator in {raw!r}")
        coef = Fraction(num, den) * (-1 if m["sign"] == "-" else 1)
        return cls.pi_multiple(coef)

    @classmethod
    def pi_multiple(cls, coef: Fraction) -> Abscissa:
        coef = Fraction(coef)
        enc = iv.PI * float(coef.numerator)
        if coef.denominator != 1:
            enc = enc / float(coef.denominator)
        return cls(enc, f"{coef}*pi")

    def shifted(self, delta: float) -> Abscissa:
        return Abscissa(self.enclosure + delta, f"{self.expr}{delta:+r}")


# -- points, boxes, obstacles ---------------------------------------------


@dataclass(frozen=True)
class Point2:
    x1: float
    x2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "x1", float(self.x1))
        object.__setattr__(self, "x2", float(self.x2))
        if not (math.isfinite(self.x1) and math.isfinite(self.x2)):
            raise GeometryError("point coordinates must be finite")

    def as_tuple(self) -> tuple[float, float]:
        return (self.x1, self.x2)


@dataclass(frozen=True)
class Box:
    x: Interval
    y: Interval

    @classmethod
    def from_bounds(cls, x0: float, x1: float, y0: float, y1: float) -> Box:
        return cls(Interval(x0, x1), Interval(y0, y1))

    @classmethod
    def around(cls, p: Point2) -> Box:
        return cls(Interval.point(p.x1), Interval.point(p.x2))


@dataclass(frozen=True)
class VerticalSlit:
    """The closed segment ``{abscissa} x [span.lo, span.hi]``."""

    abscissa: Abscissa
    span: Interval

    kind = "slit"

    @property
    def x(self) -> Interval:
        return self.abscissa.enclosure

    @property
    def x_range(self) -> Interval:
        return self.abscissa.enclosure

    def to_dict(self) -> dict[str, Any]:
        return {"kind": "slit", "x": self.abscissa.expr, "span": [self.span.lo, self.span.hi]}


@dataclass(frozen=True)
class SmoothTooth:
    """Closed region between an anchor line and a C-infinity bump reaching the mid-line.

    For anchor ``"lo"`` the region is ``{|x1 - apex| <= w, y_lo <= x2 <= h(x1)}`` with
    ``h(x1) = y_lo + (mid - y_lo) * phi((x1 - apex)/w)`` and
    ``phi(s) = exp(1 - 1/(1 - s^2))`` on ``|s| < 1`` (``phi(0) = 1``), zero elsewhere.
    Anchor ``"hi"`` is the mirror image hanging from ``y_hi``.
    """

    anchor: str
    apex: Abscissa
    half_width: float

    kind = "tooth"

    def __post_init__(self) -> None:
        if self.anchor not in ("lo", "hi"):
            raise GeometryError(f"tooth anchor must be 'lo' or 'hi', got {self.anchor!r}")
        if not (self.half_width > 0.0 and math.isfinite(self.half_width)):
            raise GeometryError("tooth foot must have positive width")

    @property
    def x_range(self) -> Interval:
        a = self.apex.enclosure
        return Interval(iv.add_down(a.lo, -self.half_width), iv.add_up(a.hi, self.half_width))

    @property
    def foot(self) -> Interval:
        return self.x_range

    def foot_inner(self) -> Interval | None:
        a = self.apex.enclosure
        lo, hi = iv.add_up(a.hi, -self.half_width), iv.add_down(a.lo, self.half_width)
        return Interval(lo, hi) if lo < hi else None

    def bump(self, t: Interval) -> Interval:
        """Enclosure of ``phi((t - apex)/w)`` over ``t``."""
        s = (t - self.apex.enclosure) / self.half_width
        m = abs(s)
        if m.lo >= 1.0:
            return Interval(0.0, 0.0)
        upper = _phi_at(m.lo).hi
        lower = 0.0 if m.hi >= 1.0 else _phi_at(m.hi).lo
        return Interval(lower, upper).clamp(0.0, 1.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": "tooth",
            "anchor": self.anchor,
            "apex": self.apex.expr,
            "half_width": self.half_width,
        }


def _phi_at(m: float) -> Interval:
    u = 1.0 - Interval.point(m).sqr()
    if u.hi <= 0.0:
        return Interval(0.0, 0.0)
    if u.lo <= 0.0:
        return Interval(0.0, iv.exp(1.0 - 1.0 / Interval.point(u.hi)).hi)
    return iv.exp(1.0 - 1.0 / u).clamp(0.0, 1.0)


def bump_value(s: float) -> float:
    """Float value of the bump profile ``phi``."""
    if abs(s) >= 1.0:
        return 0.0
    return math.exp(1.0 - 1.0 / (1.0 - s * s))


Obstacle = Union[VerticalSlit, SmoothTooth]


# -- the domain -----------------------------------------------------------


@dataclass(frozen=True)
class DomainSpec:
    y_lo: float
    y_hi: float
    mid: float
    obstacles: tuple[Obstacle, ...] = ()
    name: str = "custom"

    def __post_init__(self) -> None:
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if not (self.y_lo < self.mid < self.y_hi) or not math.isfinite(self.mid):
            raise GeometryError("strip requires y_lo < mid < y_hi with a finite mid-line")
        for i, ob in enumerate(self.obstacles):
            if isinstance(ob, VerticalSlit):
                if not (self.y_lo <= ob.span.lo <= ob.span.hi <= self.y_hi):
                    raise GeometryError(f"obstacles[{i}]: slit span must lie in [y_lo, y_hi]")
            elif not isinstance(ob, SmoothTooth):
                raise GeometryError(f"obstacles[{i}]: unknown obstacle type {type(ob).__name__}")

    # ordinates relative to the mid-line, as enclosures
    def rel(self, y: float) -> Interval:
        return Interval.point(y) - self.mid

    @property
    def depth_lo(self) -> Interval:
        return Interval.point(self.mid) - self.y_lo

    @property
    def depth_hi(self) -> Interval:
        return Interval.point(self.y_hi) - self.mid

    @property
    def is_bounded_strip(self) -> bool:
        return math.isfinite(self.y_lo) and math.isfinite(self.y_hi)

    def tooth_extent(self, tooth: SmoothTooth, t: Interval) -> Interval | None:
        """Enclosure of the mid-relative ordinates the tooth occupies over ``t``."""
        tt = t.intersect(tooth.x_range)
        if tt is None:
            return None
        phi = tooth.bump(tt)
        gap = 1.0 - phi  # in [0, 1]; zero exactly at the apex
        if tooth.anchor == "lo":
            top = -(self.depth_lo * gap)
            return Interval(self.rel(self.y_lo).lo, min(top.hi, 0.0))
        bottom = self.depth_hi * gap
        return Interval(max(bottom.lo, 0.0), self.rel(self.y_hi).hi)

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "strip": {"y_lo": self.y_lo, "y_hi": self.y_hi, "mid": self.mid},
            "obstacles": [ob.to_dict() for ob in self.obstacles],
        }

    def slits(self) -> list[VerticalSlit]:
        return [ob for ob in self.obstacles if isinstance(ob, VerticalSlit)]

    def teeth(self) -> list[SmoothTooth]:
        return [ob for ob in self.obstacles if isinstance(ob, SmoothTooth)]


def obstacle_from_dict(data: dict[str, Any]) -> Obstacle:
    kind = data.get("kind")
    if kind == "slit":
        lo, hi = data["span"]
        if not lo <= hi:
            raise GeometryError("slit span must satisfy lo <= hi")
        return VerticalSlit(Abscissa.parse(data["x"]), Interval(float(lo), float(hi)))
    if kind == "tooth":
        return SmoothTooth(str(data["anchor"]), Abscissa.parse(data["apex"]), float(data["half_width"]))
    raise GeometryError(f"unknown obstacle kind {kind!r}")


def domain_from_dict(data: dict[str, Any]) -> DomainSpec:
    strip = data["strip"]
    return DomainSpec(
        y_lo=float(strip["y_lo"]),
        y_hi=float(strip["y_hi"]),
        mid=float(strip["mid"]),
        obstacles=tuple(obstacle_from_dict(o) for o in data.get("obstacles", ())),
        name=str(data.get("name", "custom")),
    )


# -- validation -----------------------------------------------------------


def tooth_avoids_sine(domain: DomainSpec, tooth: SmoothTooth, depth: int = 30) -> bool:
    """Interval proof that the tooth misses the graph of ``sin(x1) + mid``."""
    stack = [(tooth.x_range, 0)]
    while stack:
        t, d = stack.pop()
        ext = domain.tooth_extent(tooth, t)
        if ext is None:
            continue
        s = iv.sin(t)
        if (tooth.anchor == "lo" and ext.hi < s.lo) or (tooth.anchor == "hi" and s.hi < ext.lo):
            continue
        if d >= depth or t.width < DEFAULT_MIN_WIDTH:
            return False
        stack.extend((h, d + 1) for h in t.bisect())
    return True


def connectivity_grid(domain: DomainSpec, resolution: float = DEFAULT_CONNECTIVITY_RESOLUTION):
    """Cell grid used by the flood-fill connectivity check: (free, hblock, xs, ys)."""
    if not domain.obstacles:
        return None
    xr = Interval.hull(ob.x_range for ob in domain.obstacles)
    x0, x1 = xr.lo - 1.0, xr.hi + 1.0
    nx = int(math.ceil((x1 - x0) / resolution))
    ny = int(math.ceil((domain.y_hi - domain.y_lo) / resolution))
    xs = x0 + (np.arange(nx) + 0.5) * ((x1 - x0) / nx)
    ys = domain.y_lo + (np.arange(ny) + 0.5) * ((domain.y_hi - domain.y_lo) / ny)
    from . import kernels

    gx, gy = np.meshgrid(xs, ys)
    free = kernels.points_in_domain(gx.ravel(), gy.ravel(), *kernel_arrays(domain), slit_tol=0.0)
    free = free.reshape(ny, nx)
    hblock = np.zeros((ny, max(nx - 1, 0)), dtype=np.uint8)
    for slit in domain.slits():
        # block the edge between the two cell centres straddling the slit
        j = int(np.searchsorted(xs, slit.x.mid)) - 1
        j = min(max(j, 0), nx - 2)
        rows = (ys >= slit.span.lo - resolution / 2) & (ys <= slit.span.hi + resolution / 2)
        hblock[rows, j] = 1
    return free, hblock, xs, ys


def kernel_arrays(domain: DomainSpec) -> tuple:
    """Flat float arrays describing the domain, as consumed by the compiled kernels."""
    slits = domain.slits()
    teeth = domain.teeth()
    return (
        float(domain.y_lo),
        float(domain.y_hi),
        float(domain.mid),
        np.array([s.x.mid for s in slits], dtype=np.float64),
        np.array([s.span.lo for s in slits], dtype=np.float64),
        np.array([s.span.hi for s in slits], dtype=np.float64),
        np.array([t.apex.value for t in teeth], dtype=np.float64),
        np.array([t.half_width for t in teeth], dtype=np.float64),
        np.array([1 if t.anchor == "lo" else -1 for t in teeth], dtype=np.int8),
    )


def is_connected(domain: DomainSpec, resolution: float = DEFAULT_CONNECTIVITY_RESOLUTION) -> bool:
    grid = connectivity_grid(domain, resolution)
    if grid is None:
        return True
    from . import kernels

    free, hblock, _, _ = grid
    total = int(free.sum())
    if total == 0:
        return False
    return kernels.flood_fill_count(np.ascontiguousarray(free), np.ascontiguousarray(hblock)) == total


@lru_cache(maxsize=64)
def validate(domain: DomainSpec, resolution: float = DEFAULT_CONNECTIVITY_RESOLUTION) -> DomainSpec:
    """Full build-time validation; returns the domain unchanged or raises GeometryError."""
    if not domain.is_bounded_strip:
        raise GeometryError("base must lie in a bounded strip (envelope case I)")
    for i, tooth in enumerate(domain.teeth()):
        if not tooth_avoids_sine(domain, tooth):
            raise GeometryError(
                f"obstacles[{i}]: tooth at apex {tooth.apex.expr} meets the graph of sin(x1) + {domain.mid!r}"
            )
    if not is_connected(domain, resolution):
        raise GeometryError(f"domain is not connected at grid resolution {resolution}")
    return domain


# -- presets --------------------------------------------------------------

FIG1_SLITS = (
    (Fraction(-3, 2), (0.0, 2.0)),
    (Fraction(-1, 2), (2.0, 4.0)),
    (Fraction(1, 2), (0.0, 2.0)),
    (Fraction(3, 2), (2.0, 4.0)),
)


@lru_cache(maxsize=None)
def build_figure1() -> DomainSpec:
    """The strip ``0 < x2 < 4`` minus the four slits at ``-3pi/2, -pi/2, pi/2, 3pi/2``."""
    slits = tuple(VerticalSlit(Abscissa.pi_multiple(c), Interval(*span)) for c, span in FIG1_SLITS)
    return validate(DomainSpec(0.0, 4.0, 2.0, slits, name="fig1"))


@dataclass(frozen=True)
class ToothParams:
    apex: Union[str, float]
    half_width: float = 1.2


FIG2_DEFAULT = (
    ToothParams("-3/2*pi"),
    ToothParams("-1/2*pi"),
    ToothParams("1/2*pi"),
    ToothParams("3/2*pi"),
)


def build_figure2(teeth: Sequence[ToothParams] = FIG2_DEFAULT, name: str = "fig2") -> DomainSpec:
    """Four smooth teeth S1..S4: S1, S3 rise from ``x2 = 0``; S2, S4 hang from ``x2 = 4``.

    S1, S2 must sit in ``x1 <= 0`` and S3, S4 in ``x1 >= 0``; every tooth reaches
    the mid-line ``x2 = 2`` at its apex and must miss the graph of ``sin(x1) + 2``.
    """
    teeth = tuple(teeth)
    if len(teeth) != 4:
        raise GeometryError("figure-2 domains have exactly four teeth")
    built = []
    for i, (p, anchor) in enumerate(zip(teeth, ("lo", "hi", "lo", "hi"))):
        tooth = SmoothTooth(anchor, Abscissa.parse(p.apex), float(p.half_width))
        foot = tooth.x_range
        if i < 2 and foot.hi > 0.0:
            raise GeometryError(f"S{i + 1} must lie in the half-plane x1 <= 0")
        if i >= 2 and foot.lo < 0.0:
            raise GeometryError(f"S{i + 1} must lie in the half-plane x1 >= 0")
        built.append(tooth)
    return validate(DomainSpec(0.0, 4.0, 2.0, tuple(built), name=name))


def bare_strip(y_lo: float = 0.0, y_hi: float = 4.0, mid: float = 2.0) -> DomainSpec:
    return validate(DomainSpec(y_lo, y_hi, mid, (), name="strip"))


def classify_envelope(domain: DomainSpec) -> EnvelopeCase:
    """CaseI iff the convex hull of the base is not the whole plane."""
    if math.isinf(domain.y_lo) and math.isinf(domain.y_hi):
        return EnvelopeCase.CASE_II
    return EnvelopeCase.CASE_I


# -- containment queries --------------------------------------------------


class Profile(Protocol):
    """A set over an x-range described by mid-relative enclosures (graph or band)."""

    def enclose(self, t: Interval) -> Interval: ...

    def witness(self, x: Interval, region: Interval) -> Interval | None: ...


@dataclass(frozen=True)
class GraphProfile:
    fn: GraphFunction
    mid: float

    def _offset(self) -> Interval:
        return Interval.point(self.fn.level) - self.mid

    def enclose(self, t: Interval) -> Interval:
        return self._offset() + self.fn.deviation(t)

    def witness(self, x: Interval, region: Interval) -> Interval | None:
        e = self.enclose(x)
        return e if region.contains(e) else None


@dataclass
class SweepResult:
    status: Containment
    witness: Point2 | None = None
    witness_rel: Interval | None = None
    leaves: list[tuple[Interval, Interval]] = field(default_factory=list)
    unknown: list[Interval] = field(default_factory=list)


def _strip_ok(domain: DomainSpec, e: Interval) -> bool:
    return domain.rel(domain.y_lo).hi < e.lo and e.hi < domain.rel(domain.y_hi).lo


def _below(domain: DomainSpec) -> Interval:
    return Interval(-math.inf, domain.rel(domain.y_lo).lo)


def _above(domain: DomainSpec) -> Interval:
    return Interval(domain.rel(domain.y_hi).hi, math.inf)


def _obstacle_regions(domain: DomainSpec, ob: Obstacle, x_range: Interval, t: Interval):
    """Probe (x, region) pairs: at each exact x, region is guaranteed to lie in the obstacle."""
    if isinstance(ob, VerticalSlit):
        if x_range.contains(ob.x):
            sp = Interval(domain.rel(ob.span.lo).hi, domain.rel(ob.span.hi).lo) if ob.span.lo < ob.span.hi else None
            if sp is not None:
                yield ob.x, sp
            elif ob.span.lo == ob.span.hi:
                r = domain.rel(ob.span.lo)
                if r.is_point:
                    yield ob.x, r
        return
    # the apex segment reaches exactly the mid-line
    if x_range.contains(ob.apex.enclosure):
        if ob.anchor == "lo":
            yield ob.apex.enclosure, Interval(domain.rel(domain.y_lo).hi, 0.0)
        else:
            yield ob.apex.enclosure, Interval(0.0, domain.rel(domain.y_hi).lo)
    inner = ob.foot_inner()
    xm = t.mid
    if inner is not None and inner.contains(xm) and x_range.contains(xm):
        ext = domain.tooth_extent(ob, Interval.point(xm))
        if ext is not None:
            if ob.anchor == "lo":
                phi = ob.bump(Interval.point(xm))
                top = -(domain.depth_lo * (1.0 - phi))
                if domain.rel(domain.y_lo).hi <= top.lo:
                    yield Interval.point(xm), Interval(domain.rel(domain.y_lo).hi, top.lo)
            else:
                phi = ob.bump(Interval.point(xm))
                bot = domain.depth_hi * (1.0 - phi)
                if bot.hi <= domain.rel(domain.y_hi).lo:
                    yield Interval.point(xm), Interval(bot.hi, domain.rel(domain.y_hi).lo)


def blocking_obstacles(domain: DomainSpec, t: Interval, e: Interval) -> tuple[bool, list[Obstacle]]:
    """For the piece ``t`` with mid-relative ordinates enclosed by ``e``: (strip not cleared, obstacles not cleared)."""
    blocked: list[Obstacle] = []
    for ob in domain.obstacles:
        if not t.overlaps(ob.x_range):
            continue
        if isinstance(ob, VerticalSlit):
            sp = Interval(domain.rel(ob.span.lo).lo, domain.rel(ob.span.hi).hi)
            if e.overlaps(sp):
                blocked.append(ob)
        else:
            ext = domain.tooth_extent(ob, t)
            if ext is not None and e.overlaps(ext):
                blocked.append(ob)
    return not _strip_ok(domain, e), blocked


def piece_clear(domain: DomainSpec, t: Interval, e: Interval) -> bool:
    strip_bad, blocked = blocking_obstacles(domain, t, e)
    return not strip_bad and not blocked


def sweep_profile(
    domain: DomainSpec,
    profile: Profile,
    x_range: Interval,
    depth: int = DEFAULT_DEPTH,
    min_width: float = DEFAULT_MIN_WIDTH,
    record: bool = False,
) -> SweepResult:
    """Adaptive bisection deciding whether ``{(x, mid + v) : x in x_range, v in profile(x)}`` lies in D."""
    result = SweepResult(Containment.INSIDE)
    stack = [(x_range, 0)]
    while stack:
        t, d = stack.pop()
        e = profile.enclose(t)
        strip_bad, blocked = blocking_obstacles(domain, t, e)
        if not strip_bad and not blocked:
            if record:
                result.leaves.append((t, e))
            continue
        # look for a proved complement point before subdividing
        probes = []
        if strip_bad:
            xm = Interval.point(t.mid)
            probes += [(xm, _below(domain)), (xm, _above(domain))]
        for ob in blocked:
            probes.extend(_obstacle_regions(domain, ob, x_range, t))
        for x, region in probes:
            w = profile.witness(x, region)
            if w is not None:
                result.status = Containment.NOT_INSIDE
                result.witness = Point2(x.mid, domain.mid + w.mid)
                result.witness_rel = w
                return result
        if d >= depth or t.width <= min_width:
            result.status = Containment.UNKNOWN
            result.unknown.append(t)
            continue
        lo, hi = t.bisect()
        stack.append((hi, d + 1))
        stack.append((lo, d + 1))
    return result


def graph_in_domain(
    domain: DomainSpec,
    fn: GraphFunction,
    x_range: Interval,
    depth: int = DEFAULT_DEPTH,
    min_width: float = DEFAULT_MIN_WIDTH,
) -> Containment:
    """Whether the graph ``{(t, fn(t)) : t in x_range}`` lies in D."""
    return sweep_profile(domain, GraphProfile(fn, domain.mid), x_range, depth, min_width).status


def horizontal_segment_in(domain: DomainSpec, b: float, k: float, depth: int = DEFAULT_DEPTH) -> bool:
    """Whether the closed segment ``[-k, k] x {b}`` is proved to lie in D."""
    if not k > 0:
        raise ValueError("k must be positive")
    return graph_in_domain(domain, Constant(float(b)), Interval(-float(k), float(k)), depth) is Containment.INSIDE


def box_containment(domain: DomainSpec, b: Box) -> Containment:
    """Inside / NotInside (proved) / Unknown for a closed axis-aligned box."""
    if b.y.lo <= domain.y_lo or b.y.hi >= domain.y_hi:
        return Containment.NOT_INSIDE
    ey = b.y - domain.mid
    unknown = False
    for ob in domain.obstacles:
        if not b.x.overlaps(ob.x_range):
            continue
        if isinstance(ob, VerticalSlit):
            if not b.y.overlaps(ob.span):
                continue
            if b.x.contains(ob.x):
                return Containment.NOT_INSIDE
            unknown = True
            continue
        ext = domain.tooth_extent(ob, b.x)
        if ext is None or not ey.overlaps(ext):
            continue
        for _, region in _obstacle_regions(domain, ob, b.x, b.x):
            # absolute ordinates guaranteed to map into the region
            lo, hi = iv.add_up(region.lo, domain.mid), iv.add_down(region.hi, domain.mid)
            if lo <= hi and b.y.overlaps(Interval(lo, hi)):
                return Containment.NOT_INSIDE
        unknown = True
    return Containment.UNKNOWN if unknown else Containment.INSIDE


def contains(domain: DomainSpec, p: Union[Point2, tuple[float, float]]) -> bool:
    """True iff ``p`` is proved to lie in the open set D."""
    if not isinstance(p, Point2):
        p = Point2(float(p[0]), float(p[1]))
    return box_containment(domain, Box.around(p)) is Containment.INSIDE


def contains_many(domain: DomainSpec, xs: np.ndarray, ys: np.ndarray, slit_tol: float = 0.0) -> np.ndarray:
    """Vectorised float membership test (not a proof); slits thickened by ``slit_tol``."""
    from . import kernels

    xs = np.ascontiguousarray(xs, dtype=np.float64)
    ys = np.ascontiguousarray(ys, dtype=np.float64)
    return kernels.points_in_domain(xs, ys, *kernel_arrays(domain), slit_tol=slit_tol).astype(bool)


def domain_id(domain: DomainSpec) -> str:
    """``name:digest`` where the digest covers the canonical JSON of the domain."""
    import hashlib
    import json

    blob = json.dumps(domain.to_dict(), sort_keys=True, separators=(",", ":"))
    return f"{domain.name}:{hashlib.sha256(blob.encode()).hexdigest()[:16]}"
