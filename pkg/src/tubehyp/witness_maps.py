"""The harmonic family ``f_n`` and its holomorphic lift ``g_n``.

``f_n(x + iy) = (n x, sin(n x) cosh(n y) / cosh(n) + mid)`` maps the unit
square Q onto the band between ``sin(x1)/cosh(n) + mid`` and ``sin(x1) + mid``
over ``|x1| <= n``.  ``g_n(z) = (n z, sin(n z)/cosh(n) + mid)`` has ``f_n`` as
its real part.  Every ratio ``cosh(ny)/cosh(n)`` is formed from negative
exponentials so nothing overflows for large ``n``.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

import numpy as np

from . import interval as iv
from .functions import GraphFunction
from .geometry import (
    DEFAULT_DEPTH,
    DomainSpec,
    Point2,
    _obstacle_regions,
    _above,
    _below,
    blocking_obstacles,
    domain_id,
    piece_clear,
    sweep_profile,
    Containment,
)
from .interval import Interval

N_CAP = 1000
DEFAULT_MID = 2.0
UNIT_SQUARE = (Interval(-1.0, 1.0), Interval(-1.0, 1.0))
INCLUSION_CHAIN = "f_n(disc) <= f_n(Q) <= D, Q = [-1,1]x[-1,1]"


def _check_n(n: int, cap: int | None = N_CAP) -> int:
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError(f"family parameter n must be a positive integer, got {n!r}")
    if cap is not None and n > cap:
        raise ValueError(f"n = {n} exceeds the cap {cap}")
    return int(n)


# -- stable hyperbolic ratios ------------------------------------------------


def cosh_ratio(n: float, y: float) -> float:
    """``cosh(n y) / cosh(n)``."""
    a = abs(y)
    return (math.exp(n * (a - 1.0)) + math.exp(-n * (a + 1.0))) / (1.0 + math.exp(-2.0 * n))


def sinh_ratio(n: float, y: float) -> float:
    """``sinh(n y) / cosh(n)``."""
    a = abs(y)
    v = (math.exp(n * (a - 1.0)) - math.exp(-n * (a + 1.0))) / (1.0 + math.exp(-2.0 * n))
    return math.copysign(v, y) if v else 0.0


def cosh_ratio_interval(n: int, y0: float) -> Interval:
    """Enclosure of ``cosh(n y0)/cosh(n)`` for ``|y0| <= 1``."""
    a = abs(float(y0))
    if a == 1.0:
        return Interval(1.0, 1.0)
    num = iv.exp(Interval.point(n) * (a - 1.0)) + iv.exp(Interval.point(-n) * (a + 1.0))
    den = iv.exp(Interval.point(-2.0 * n)) + 1.0
    return (num / den).clamp(0.0, 1.0)


def _np_cosh_ratio(n: float, y: np.ndarray) -> np.ndarray:
    a = np.abs(y)
    return (np.exp(n * (a - 1.0)) + np.exp(-n * (a + 1.0))) / (1.0 + math.exp(-2.0 * n))


def _np_sinh_ratio(n: float, y: np.ndarray) -> np.ndarray:
    a = np.abs(y)
    return np.sign(y) * (np.exp(n * (a - 1.0)) - np.exp(-n * (a + 1.0))) / (1.0 + math.exp(-2.0 * n))


# -- the maps ---------------------------------------------------------------


@dataclass(frozen=True)
class Matrix2:
    a: float
    b: float
    c: float
    d: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c, self.d)):
            raise ValueError("matrix entries must be finite")

    def rows(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return ((self.a, self.b), (self.c, self.d))

    def to_numpy(self) -> np.ndarray:
        return np.array(self.rows(), dtype=float)

    @property
    def frobenius(self) -> float:
        return math.hypot(self.a, self.b, self.c, self.d)


def op_norm(m: Matrix2) -> float:
    """Largest singular value, ``(|(a+d, c-b)| + |(a-d, b+c)|) / 2``."""
    return 0.5 * (math.hypot(m.a + m.d, m.c - m.b) + math.hypot(m.a - m.d, m.b + m.c))


def frobenius_norm(m: Matrix2) -> float:
    return m.frobenius


def op_norm_at_origin(n: int) -> float:
    """Closed form ``n sqrt(1 + sech(n)^2)`` of ``op_norm(jac_f(n, 0))``."""
    s = cosh_ratio(n, 0.0)
    return n * math.sqrt(1.0 + s * s)


def eval_f(n: int, z: complex, mid: float = DEFAULT_MID) -> Point2:
    n = _check_n(n, None)
    x, y = float(z.real), float(complex(z).imag)
    return Point2(n * x, math.sin(n * x) * cosh_ratio(n, y) + mid)


def jac_f(n: int, z: complex) -> Matrix2:
    n = _check_n(n, None)
    x, y = float(z.real), float(complex(z).imag)
    return Matrix2(
        float(n),
        0.0,
        n * math.cos(n * x) * cosh_ratio(n, y),
        n * math.sin(n * x) * sinh_ratio(n, y),
    )


def _sin_over_cosh(n: int, z: complex) -> complex:
    x, y = z.real, z.imag
    return complex(math.sin(n * x) * cosh_ratio(n, y), math.cos(n * x) * sinh_ratio(n, y))


def _cos_over_cosh(n: int, z: complex) -> complex:
    x, y = z.real, z.imag
    return complex(math.cos(n * x) * cosh_ratio(n, y), -math.sin(n * x) * sinh_ratio(n, y))


def eval_g(n: int, z: complex, mid: float = DEFAULT_MID) -> tuple[complex, complex]:
    n = _check_n(n, None)
    z = complex(z)
    return n * z, _sin_over_cosh(n, z) + mid


def dg(n: int, z: complex = 0j) -> tuple[complex, complex]:
    """Complex derivative ``g_n'(z)``."""
    n = _check_n(n, None)
    return complex(n), n * _cos_over_cosh(n, complex(z))


@dataclass(frozen=True)
class WitnessFamily:
    n: int
    strip_mid: float = DEFAULT_MID

    def __post_init__(self) -> None:
        _check_n(self.n, None)

    @property
    def base(self) -> Point2:
        return eval_f(self.n, 0j, self.strip_mid)

    def f(self, z: complex) -> Point2:
        return eval_f(self.n, z, self.strip_mid)

    def g(self, z: complex) -> tuple[complex, complex]:
        return eval_g(self.n, z, self.strip_mid)

    def jac(self, z: complex = 0j) -> Matrix2:
        return jac_f(self.n, z)

    def dg0(self) -> tuple[complex, complex]:
        return dg(self.n, 0j)


# -- image band and curves --------------------------------------------------


def image_band(n: int, x1: float, mid: float = DEFAULT_MID) -> Interval:
    """Second components of ``f_n`` over the fibre ``{x = x1/n, |y| <= 1}`` (outward rounded)."""
    n = _check_n(n, None)
    if not abs(x1) <= n:
        raise ValueError(f"|x1| = {abs(x1)!r} exceeds n = {n}")
    s = iv.sin(Interval.point(x1))
    return Interval.hull((s * iv.sech(n), s)) + mid


@dataclass(frozen=True)
class ImageCurve(GraphFunction):
    """``x1 -> amplitude * sin(x1) + level`` on ``[-n, n]``; the image of ``[-1,1] x {y0}``."""

    n: int
    y0: float
    amplitude: Interval
    level: float = DEFAULT_MID

    @property
    def x_range(self) -> Interval:
        return Interval(-float(self.n), float(self.n))

    def deviation_value(self, t: float) -> float:
        return math.sin(t) * cosh_ratio(self.n, self.y0)

    def deviation(self, t: Interval) -> Interval:
        return iv.sin(t) * self.amplitude

    def to_dict(self) -> dict[str, Any]:
        return {"type": "image_curve", "n": self.n, "y0": self.y0, "level": self.level}


def image_curve(n: int, y0: float, mid: float = DEFAULT_MID) -> ImageCurve:
    n = _check_n(n, None)
    if not abs(y0) <= 1.0:
        raise ValueError("|y0| must be at most 1")
    return ImageCurve(n, float(y0), cosh_ratio_interval(n, y0), mid)


def band_samples(n: int, count: int = 401, mid: float = DEFAULT_MID) -> list[tuple[float, float, float]]:
    """Rows ``(x1, band_lo, band_hi)`` on a uniform grid of ``[-n, n]`` (floats, for plotting)."""
    n = _check_n(n, None)
    s = cosh_ratio(n, 0.0)
    rows = []
    for x1 in np.linspace(-n, n, count):
        a, b = math.sin(x1) * s + mid, math.sin(x1) + mid
        rows.append((float(x1), min(a, b), max(a, b)))
    return rows


@dataclass(frozen=True)
class BandProfile:
    """The band ``sin(x1) * [sech n, 1]`` as a mid-relative sweep profile."""

    n: int

    @property
    def ratio(self) -> Interval:
        return Interval(iv.sech(self.n).lo, 1.0)

    def enclose(self, t: Interval) -> Interval:
        return iv.sin(t) * self.ratio

    def inner(self, x: Interval) -> Interval | None:
        """Ordinates lying in the band at every point of ``x`` (and for every admissible sech value)."""
        s = iv.sin(x)
        sech = iv.sech(self.n)
        if s.lo >= 0.0:
            lo, hi = (s * sech).hi, s.lo
        elif s.hi <= 0.0:
            lo, hi = s.hi, (s * sech).lo
        else:
            return None
        return Interval(lo, hi) if lo <= hi else None

    def witness(self, x: Interval, region: Interval) -> Interval | None:
        inner = self.inner(x)
        return None if inner is None else inner.intersect(region)


# -- containment certificates -----------------------------------------------


class ContainmentOutcome(str, enum.Enum):
    CONTAINED = "Contained"
    NOT_CONTAINED = "NotContained"
    UNKNOWN = "Unknown"


def _iv(v: Interval) -> list[float]:
    return [v.lo, v.hi]


def _from_iv(v: list[float]) -> Interval:
    return Interval(float(v[0]), float(v[1]))


@dataclass
class ContainmentCertificate:
    n: int
    domain: str
    outcome: ContainmentOutcome
    strip_ok: bool
    checked_obstacles: list[dict[str, Any]] = field(default_factory=list)
    leaves: list[tuple[Interval, Interval]] = field(default_factory=list)
    witness: dict[str, Any] | None = None
    depth: int = DEFAULT_DEPTH
    chain: str = INCLUSION_CHAIN

    @property
    def contained(self) -> bool:
        return self.outcome is ContainmentOutcome.CONTAINED

    def to_dict(self) -> dict[str, Any]:
        return {
            "n": self.n,
            "domain": self.domain,
            "outcome": self.outcome.value,
            "strip_ok": self.strip_ok,
            "checked_obstacles": self.checked_obstacles,
            "leaves": [[t.lo, t.hi, e.lo, e.hi] for t, e in self.leaves],
            "witness": self.witness,
            "depth": self.depth,
            "chain": self.chain,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ContainmentCertificate:
        return cls(
            n=int(data["n"]),
            domain=str(data["domain"]),
            outcome=ContainmentOutcome(data["outcome"]),
            strip_ok=bool(data["strip_ok"]),
            checked_obstacles=list(data.get("checked_obstacles", [])),
            leaves=[(Interval(a, b), Interval(c, d)) for a, b, c, d in data.get("leaves", [])],
            witness=data.get("witness"),
            depth=int(data.get("depth", DEFAULT_DEPTH)),
            chain=str(data.get("chain", INCLUSION_CHAIN)),
        )


def preimage(n: int, x1: float, x2: float, mid: float = DEFAULT_MID) -> complex | None:
    """A point ``z`` of Q with ``f_n(z)`` approximately ``(x1, x2)`` (floats; informational)."""
    s = math.sin(x1)
    if s == 0.0:
        return None
    r = (x2 - mid) / s
    if not 0.0 < r <= 1.0:
        return None
    ny = math.acosh(max(r * math.cosh(n), 1.0)) if n <= 700 else max(n + math.log(r), 0.0)
    return complex(x1 / n, min(ny / n, 1.0))


def verify_containment(
    n: int,
    domain: DomainSpec,
    depth: int = DEFAULT_DEPTH,
    cap: int | None = N_CAP,
) -> ContainmentCertificate:
    """Interval sweep of the band ``f_n(Q)`` over ``[-n, n]`` against the strip and every obstacle."""
    n = _check_n(n, cap)
    band = BandProfile(n)
    x_range = Interval(-float(n), float(n))
    sweep = sweep_profile(domain, band, x_range, depth=depth, record=True)
    whole = band.enclose(x_range)
    strip_ok = not blocking_obstacles(domain, Interval(0.0, 0.0), whole)[0]
    did = domain_id(domain)

    if sweep.status is Containment.NOT_INSIDE:
        w = sweep.witness
        assert w is not None and sweep.witness_rel is not None
        xw = _witness_abscissa(domain, x_range, band, sweep.witness_rel, w.x1)
        z = preimage(n, w.x1, w.x2, domain.mid)
        witness = {
            "point": [w.x1, w.x2],
            "x": _iv(xw),
            "y_rel": _iv(sweep.witness_rel),
            "preimage": None if z is None else [z.real, z.imag],
        }
        return ContainmentCertificate(n, did, ContainmentOutcome.NOT_CONTAINED, strip_ok, witness=witness, depth=depth)
    if sweep.status is Containment.UNKNOWN:
        return ContainmentCertificate(n, did, ContainmentOutcome.UNKNOWN, strip_ok, depth=depth)

    records = []
    for i, ob in enumerate(domain.obstacles):
        if not ob.x_range.overlaps(x_range):
            continue
        proof = [[t.lo, t.hi, e.lo, e.hi] for t, e in sweep.leaves if t.overlaps(ob.x_range)]
        records.append(
            {
                "index": i,
                "obstacle": ob.to_dict(),
                "band_rel_at_abscissa": _iv(band.enclose(ob.x_range.intersect(x_range))),
                "band_at_abscissa": _iv(band.enclose(ob.x_range.intersect(x_range)) + domain.mid),
                "proof_leaves": proof,
            }
        )
    return ContainmentCertificate(
        n, did, ContainmentOutcome.CONTAINED, strip_ok, records, list(sweep.leaves), depth=depth
    )


def _witness_abscissa(domain: DomainSpec, x_range: Interval, band: BandProfile, w: Interval, x1: float) -> Interval:
    for x, region in _complement_regions(domain, x_range, Interval.point(x1)):
        if x.contains(x1) and region.contains(w):
            inner = band.inner(x)
            if inner is not None and inner.contains(w):
                return x
    return Interval.point(x1)


def _complement_regions(domain: DomainSpec, x_range: Interval, t: Interval):
    yield t, _below(domain)
    yield t, _above(domain)
    for ob in domain.obstacles:
        yield from _obstacle_regions(domain, ob, x_range, t)


def recheck_containment(cert: ContainmentCertificate, domain: DomainSpec) -> tuple[bool, str]:
    """Re-verify a stored certificate from its leaves or witness without searching."""
    if cert.domain != domain_id(domain):
        return False, "domain id mismatch"
    try:
        n = _check_n(cert.n, None)
    except ValueError as exc:
        return False, str(exc)
    band = BandProfile(n)
    x_range = Interval(-float(n), float(n))
    if cert.outcome is ContainmentOutcome.UNKNOWN:
        return True, "unknown outcome carries no claim"
    if cert.outcome is ContainmentOutcome.NOT_CONTAINED:
        w = cert.witness or {}
        try:
            x, y = _from_iv(w["x"]), _from_iv(w["y_rel"])
        except (KeyError, TypeError, ValueError):
            return False, "witness missing"
        if not x_range.contains(x):
            return False, "witness abscissa outside [-n, n]"
        inner = band.inner(x)
        if inner is None or not inner.contains(y):
            return False, "witness ordinate not proved to lie in the band"
        for xr, region in _complement_regions(domain, x_range, x):
            if xr == x and region.contains(y):
                return True, "witness re-verified"
        return False, "witness ordinate not proved to lie outside D"
    # Contained: leaves must tile [-n, n] and each must clear the domain
    leaves = sorted(cert.leaves, key=lambda te: te[0].lo)
    if not leaves or leaves[0][0].lo != x_range.lo or leaves[-1][0].hi != x_range.hi:
        return False, "leaves do not cover [-n, n]"
    for (t0, _), (t1, _) in zip(leaves, leaves[1:]):
        if t0.hi != t1.lo:
            return False, f"gap between leaves at {t0.hi!r}"
    for t, _ in leaves:
        if not piece_clear(domain, t, band.enclose(t)):
            return False, f"leaf [{t.lo!r}, {t.hi!r}] does not clear the domain"
    expected = {i for i, ob in enumerate(domain.obstacles) if ob.x_range.overlaps(x_range)}
    if {int(r["index"]) for r in cert.checked_obstacles} != expected:
        return False, "obstacle records incomplete"
    return True, "leaves re-verified"


# -- finite-difference residuals --------------------------------------------

_FD_GRID = np.linspace(-0.9, 0.9, 41)


def _check_step(h: float) -> float:
    h = float(h)
    if not 0.0 < h <= 0.1:
        raise ValueError("grid_step must lie in (0, 0.1]")
    return h


def _affine_laplacian_exact(n: int, h: float) -> float:
    # n*x is affine: evaluate its stencil in rationals at the exact points x +- h
    fh, worst = Fraction(h), Fraction(0)
    for x in _FD_GRID:
        fx = Fraction(float(x))
        lap = n * (fx + fh) + n * (fx - fh) + 2 * n * fx - 4 * n * fx
        worst = max(worst, abs(lap))
    return float(worst / (fh * fh))


def harmonicity_residuals(n: int, grid_step: float) -> tuple[float, float]:
    """Max 5-point Laplacian magnitude of each component of ``f_n`` over a fixed interior grid of Q."""
    n = _check_n(n, None)
    h = _check_step(grid_step)
    x, y = np.meshgrid(_FD_GRID, _FD_GRID, indexing="ij")

    def u(xx, yy):  # second component minus the constant
        return np.sin(n * xx) * _np_cosh_ratio(n, yy)

    lap = (u(x + h, y) + u(x - h, y) + u(x, y + h) + u(x, y - h) - 4.0 * u(x, y)) / (h * h)
    return _affine_laplacian_exact(n, h), float(np.max(np.abs(lap)))


def harmonicity_residual(n: int, grid_step: float) -> float:
    return max(harmonicity_residuals(n, grid_step))


def harmonicity_bound(n: int, grid_step: float) -> float:
    """``C h^2 n^4`` with ``C = cosh(n h)/6``; the stencil applied to ``sin(nx)cosh(ny)`` is exact up to this."""
    h = _check_step(grid_step)
    return math.cosh(n * h) / 6.0 * h * h * n**4


def cr_residuals(n: int, grid_step: float) -> tuple[float, float]:
    """Max ``|D_x g + i D_y g|`` (central differences) of each component of ``g_n``."""
    n = _check_n(n, None)
    h = _check_step(grid_step)
    x, y = np.meshgrid(_FD_GRID, _FD_GRID, indexing="ij")

    def g2(xx, yy):
        re = np.sin(n * xx) * _np_cosh_ratio(n, yy)
        im = np.cos(n * xx) * _np_sinh_ratio(n, yy)
        return re + 1j * im

    dx = (g2(x + h, y) - g2(x - h, y)) / (2.0 * h)
    dy = (g2(x, y + h) - g2(x, y - h)) / (2.0 * h)
    # first component n*z: both difference quotients are exact in rationals
    fh = Fraction(h)
    worst = Fraction(0)
    for xv in _FD_GRID:
        fx = Fraction(float(xv))
        dx1 = n * ((fx + fh) - (fx - fh)) / (2 * fh)
        worst = max(worst, abs(dx1 - n))  # D_y(n z) = i n, so D_x + i D_y = dx1 - n
    return float(worst), float(np.max(np.abs(dx + 1j * dy)))


def cr_residual(n: int, grid_step: float) -> float:
    return max(cr_residuals(n, grid_step))


def cr_bound(n: int, grid_step: float) -> float:
    """``|sinh(nh) - sin(nh)| / h`` times ``max |cos(nz)|/cosh n <= 1``; about ``n^3 h^2 / 3``."""
    h = _check_step(grid_step)
    return (math.sinh(n * h) - math.sin(n * h)) / h


__all__ = [
    "BandProfile",
    "ContainmentCertificate",
    "ContainmentOutcome",
    "ImageCurve",
    "Matrix2",
    "N_CAP",
    "WitnessFamily",
    "band_samples",
    "cosh_ratio",
    "cr_bound",
    "cr_residual",
    "cr_residuals",
    "dg",
    "eval_f",
    "eval_g",
    "frobenius_norm",
    "harmonicity_bound",
    "harmonicity_residual",
    "harmonicity_residuals",
    "image_band",
    "image_curve",
    "jac_f",
    "op_norm",
    "op_norm_at_origin",
    "preimage",
    "recheck_containment",
    "verify_containment",
]
