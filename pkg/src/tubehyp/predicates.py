"""Finite-resolution checks of Property (L), Property (J-P)_aff and J-P witnesses.

For a base point ``a`` and each ``k`` up to ``K`` the checkers either exhibit a
witness (a horizontal segment, an affine graph, a trigonometric-polynomial
graph) or cover the whole tolerance set with cells, each refuted by an
interval argument.  Refutation is upward closed in ``k`` (a witness for
``k + 1`` restricts to one for ``k``), so a refuted tail ``k0..K`` is the
finite evidence for the property at ``a``.

Property (J-P) itself is not finitely decidable over all real-analytic
functions: only witnesses are ever reported for it, never refutations.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterator, Sequence

import numpy as np

from . import interval as iv
from .functions import Affine, Constant, GraphFunction, TrigPolynomial, function_from_dict
from .geometry import (
    Containment,
    DomainSpec,
    Point2,
    SmoothTooth,
    VerticalSlit,
    contains,
    graph_in_domain,
    horizontal_segment_in,
)
from .interval import Interval

DEFAULT_K = 20
DEFAULT_CELL_DEPTH = 30
DEFAULT_SEARCH_BUDGET = 100_000
DEFAULT_MAX_CELLS = 50_000


class PropertyKind(str, enum.Enum):
    L = "L"
    JPAFF = "JPaff"
    JPWITNESS = "JPwitness"


class Outcome(str, enum.Enum):
    WITNESS = "WitnessFound"
    REFUTED = "RefutedAtResolution"
    UNKNOWN = "Unknown"


class Verdict(str, enum.Enum):
    HOLDS = "HoldsUpToK"
    FAILS = "FailsUpToK"
    INCONCLUSIVE = "Inconclusive"


class PreconditionError(ValueError):
    pass


@dataclass
class KResult:
    k: int
    outcome: Outcome
    payload: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"k": self.k, "outcome": self.outcome.value, "payload": self.payload}


@dataclass
class PropertyReport:
    kind: PropertyKind
    base_point: Point2
    K: int
    per_k: list[KResult]
    verdict: Verdict
    resolution: dict[str, Any] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def outcome(self, k: int) -> Outcome:
        return self.per_k[k - 1].outcome

    def witness_ks(self) -> list[int]:
        return [r.k for r in self.per_k if r.outcome is Outcome.WITNESS]

    def refuted_ks(self) -> list[int]:
        return [r.k for r in self.per_k if r.outcome is Outcome.REFUTED]

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "base_point": list(self.base_point.as_tuple()),
            "K": self.K,
            "verdict": self.verdict.value,
            "resolution": self.resolution,
            "notes": list(self.notes),
            "per_k": [r.to_dict() for r in self.per_k],
        }


def summarize(per_k: Sequence[KResult], allow_holds: bool = True) -> Verdict:
    """FailsUpToK iff every k has a witness; HoldsUpToK iff a refuted tail reaches K and nothing is Unknown."""
    outcomes = [r.outcome for r in per_k]
    if outcomes and all(o is Outcome.WITNESS for o in outcomes):
        return Verdict.FAILS
    if not allow_holds or Outcome.UNKNOWN in outcomes or not outcomes:
        return Verdict.INCONCLUSIVE
    if outcomes[-1] is Outcome.REFUTED:
        return Verdict.HOLDS
    return Verdict.INCONCLUSIVE


def _tolerance(k: int) -> Interval:
    return Interval.point(1.0) / float(k)


def _require_inside(domain: DomainSpec, a: Point2) -> None:
    if not contains(domain, a):
        raise PreconditionError(f"base point {a.as_tuple()} is not in the domain")


def _run(fn: Callable[[int], KResult], ks: Sequence[int], workers: int) -> list[KResult]:
    if workers <= 1 or len(ks) <= 1:
        return [fn(k) for k in ks]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, ks))


# -- Property (L) ---------------------------------------------------------


def _l_blocking(domain: DomainSpec, k: int) -> list[tuple[float, float, str]]:
    """Closed height ranges ``[lo, hi]`` proved to meet every segment ``[-k,k] x {b}`` with b inside."""
    span = Interval(-float(k), float(k))
    out: list[tuple[float, float, str]] = [
        (-math.inf, domain.y_lo, "strip"),
        (domain.y_hi, math.inf, "strip"),
    ]
    for i, ob in enumerate(domain.obstacles):
        if isinstance(ob, VerticalSlit):
            if span.contains(ob.x):
                out.append((ob.span.lo, ob.span.hi, f"obstacle:{i}"))
            continue
        if span.contains(ob.apex.enclosure):
            if ob.anchor == "lo":
                out.append((domain.y_lo, domain.mid, f"obstacle:{i}"))
            else:
                out.append((domain.mid, domain.y_hi, f"obstacle:{i}"))
        inner = ob.foot_inner()
        for x in (-float(k), float(k)):
            if inner is not None and inner.contains(x):
                for _, region in _tooth_probe_regions(domain, ob, Interval.point(x)):
                    lo = iv.add_up(region.lo, domain.mid)
                    hi = iv.add_down(region.hi, domain.mid)
                    if lo <= hi:
                        out.append((lo, hi, f"obstacle:{i}"))
    return out


def _tooth_probe_regions(domain: DomainSpec, ob: SmoothTooth, x: Interval):
    phi = ob.bump(x)
    if ob.anchor == "lo":
        top = -(domain.depth_lo * (1.0 - phi))
        lo = domain.rel(domain.y_lo).hi
        if lo <= top.lo:
            yield x, Interval(lo, top.lo)
    else:
        bot = domain.depth_hi * (1.0 - phi)
        hi = domain.rel(domain.y_hi).lo
        if bot.hi <= hi:
            yield x, Interval(bot.hi, hi)


def _l_for_k(domain: DomainSpec, a: Point2, k: int, tol: Interval, depth: int) -> KResult:
    lo, hi = iv.add_down(a.x2, -tol.hi), iv.add_up(a.x2, tol.hi)
    blocks = _l_blocking(domain, k)
    cells: list[dict[str, Any]] = []
    unknown: list[list[float]] = []
    queue: deque[tuple[float, float, int]] = deque()

    def try_witness(b: float) -> bool:
        dev = abs(Interval.point(b) - a.x2)
        return dev.hi <= tol.lo and horizontal_segment_in(domain, b, float(k))

    if try_witness(a.x2):
        return KResult(k, Outcome.WITNESS, {"b": a.x2})
    # first split exactly at a2 so cell edges line up with obstacle ends at the base height
    queue.append((lo, a.x2, 1))
    queue.append((a.x2, hi, 1))
    while queue:
        c_lo, c_hi, d = queue.popleft()
        reason = next((r for blo, bhi, r in blocks if blo <= c_lo and c_hi <= bhi), None)
        if reason is not None:
            cells.append({"lo": c_lo, "hi": c_hi, "reason": reason})
            continue
        b = 0.5 * (c_lo + c_hi)
        if try_witness(b):
            return KResult(k, Outcome.WITNESS, {"b": b})
        if d >= depth:
            unknown.append([c_lo, c_hi])
            continue
        queue.append((c_lo, b, d + 1))
        queue.append((b, c_hi, d + 1))
    if unknown:
        return KResult(k, Outcome.UNKNOWN, {"unknown_cells": unknown, "refuted_cells": len(cells)})
    cells.sort(key=lambda c: c["lo"])
    return KResult(k, Outcome.REFUTED, {"range": [lo, hi], "cells": cells})


@dataclass(frozen=True)
class _LTask:
    domain: DomainSpec
    a: Point2
    tol: Callable[[int], Interval]
    depth: int

    def __call__(self, k: int) -> KResult:
        return _l_for_k(self.domain, self.a, k, self.tol(k), self.depth)


def check_property_L(
    domain: DomainSpec,
    a: Point2,
    K: int = DEFAULT_K,
    tol_schedule: Callable[[int], Interval] | None = None,
    depth: int = DEFAULT_CELL_DEPTH,
    workers: int = 1,
) -> PropertyReport:
    """Per-k search for heights ``b`` with ``|b - a2| <= tol(k)`` and ``[-k,k] x {b}`` in D."""
    _require_inside(domain, a)
    tol = tol_schedule or _tolerance
    per_k = _run(_LTask(domain, a, tol, depth), range(1, K + 1), workers)
    report = PropertyReport(PropertyKind.L, a, K, per_k, summarize(per_k), {"depth": depth, "tolerance": "1/k" if tol_schedule is None else "custom"})
    _note_monotonicity(report)
    return report


def _note_monotonicity(report: PropertyReport) -> None:
    ref = report.refuted_ks()
    wit = report.witness_ks()
    if ref and wit and min(ref) < max(wit):
        report.notes.append(f"witness at k={max(wit)} above refuted k={min(ref)}: tolerance schedule not monotone")


# -- Property (J-P)_aff ---------------------------------------------------


@dataclass(frozen=True)
class Probe:
    """At the exact abscissa in ``x``, every ordinate offset in ``[lo, hi]`` lies outside D."""

    x: Interval
    lo: float
    hi: float
    source: str

    def to_dict(self) -> dict[str, Any]:
        return {"x": [self.x.lo, self.x.hi], "lo": self.lo, "hi": self.hi, "source": self.source}


def affine_probes(domain: DomainSpec, k: int) -> list[Probe]:
    """Blocked vertical ranges (mid-relative) along ``[-k, k]`` used to refute affine cells."""
    span = Interval(-float(k), float(k))
    below, above = domain.rel(domain.y_lo), domain.rel(domain.y_hi)
    out = [
        Probe(Interval.point(-float(k)), -math.inf, below.lo, "strip"),
        Probe(Interval.point(float(k)), -math.inf, below.lo, "strip"),
        Probe(Interval.point(-float(k)), above.hi, math.inf, "strip"),
        Probe(Interval.point(float(k)), above.hi, math.inf, "strip"),
    ]
    for i, ob in enumerate(domain.obstacles):
        if isinstance(ob, VerticalSlit):
            if span.contains(ob.x):
                lo, hi = domain.rel(ob.span.lo), domain.rel(ob.span.hi)
                if lo.hi <= hi.lo:
                    out.append(Probe(ob.x, lo.hi, hi.lo, f"obstacle:{i}"))
            continue
        if span.contains(ob.apex.enclosure):
            if ob.anchor == "lo":
                out.append(Probe(ob.apex.enclosure, below.hi, 0.0, f"obstacle:{i}"))
            else:
                out.append(Probe(ob.apex.enclosure, 0.0, above.lo, f"obstacle:{i}"))
        inner = ob.foot_inner()
        if inner is None:
            continue
        for x in (ob.apex.value - 0.5 * ob.half_width, ob.apex.value + 0.5 * ob.half_width, -float(k), float(k)):
            if inner.contains(x) and span.contains(x):
                for xi, region in _tooth_probe_regions(domain, ob, Interval.point(x)):
                    out.append(Probe(xi, region.lo, region.hi, f"obstacle:{i}"))
    return out


@dataclass(frozen=True)
class _Constraint:
    """``sense * (c*x + d' - bound) > 0`` (strict) or ``>= 0``, with ``d' = d - mid``."""

    x: Interval
    sense: float
    bound: float
    strict: bool
    probe: int  # index into the probe list, or -1..-4 for diamond edges


def _forced(probe: Probe, v: Interval, strip_lo: float, strip_hi: float, idx: int) -> _Constraint | None:
    """One-sided constraint the probe imposes on the cell, given the cell's value range ``v``."""
    can_below = v.lo < probe.lo and probe.lo > strip_lo
    can_above = v.hi > probe.hi and probe.hi < strip_hi
    if can_below and can_above:
        return None
    if can_above:
        return _Constraint(probe.x, 1.0, probe.hi, True, idx)
    if can_below:
        return _Constraint(probe.x, -1.0, probe.lo, True, idx)
    return None


def _comb_max(cons: Sequence[_Constraint], weights: Sequence[float], c: Interval, dp: Interval) -> float:
    """Upper bound over the cell of ``sum w_i * sense_i * (c x_i + d' - bound_i)``."""
    coef_c = Interval.point(0.0)
    coef_d = Interval.point(0.0)
    const = Interval.point(0.0)
    for con, w in zip(cons, weights):
        sw = Interval.point(w) * con.sense
        coef_c = coef_c + sw * con.x
        coef_d = coef_d + sw
        if math.isinf(con.bound):
            return math.inf
        const = const - sw * con.bound
    return (coef_c * c + coef_d * dp + const).hi


def _diamond_constraints(k: int, a2_rel: float, tol: Interval) -> list[_Constraint]:
    """The diamond ``k|c| + |d' - a2'| <= T`` as four closed half-planes, slightly loosened by rounding."""
    out = []
    for i, (sc, sd) in enumerate(((1, 1), (1, -1), (-1, 1), (-1, -1))):
        # sc*k*c + sd*(d' - a2') <= T  <=>  -sd * (c*(sc*sd*k) + d' - (a2' + sd*T)) >= 0
        bound = iv.add_up(a2_rel, tol.hi) if sd > 0 else iv.add_down(a2_rel, -tol.hi)
        out.append(_Constraint(Interval.point(float(sc * sd * k)), -float(sd), bound, False, -(i + 1)))
    return out


def _pair_refutes(ci: _Constraint, cj: _Constraint, c: Interval, dp: Interval) -> tuple[float, float] | None:
    if not (ci.strict or cj.strict):
        return None
    cands = {1.0}
    for cc in (c.lo, c.hi):
        for dd in (dp.lo, dp.hi):
            gi = ci.sense * (cc * ci.x.mid + dd - ci.bound)
            gj = cj.sense * (cc * cj.x.mid + dd - cj.bound)
            if gj != 0.0 and math.isfinite(gi) and math.isfinite(gj):
                r = -gi / gj
                if r > 0.0 and math.isfinite(r):
                    cands.add(r)
    for r in sorted(cands):
        if _comb_max((ci, cj), (1.0, r), c, dp) <= 0.0:
            return (1.0, r)
    return None


def refute_affine_cell(
    probes: Sequence[Probe], c: Interval, d: Interval, domain: DomainSpec, a2: float, k: int
) -> dict[str, Any] | None:
    """Reason the cell of affine functions ``c*t + d`` contains no J-P_aff witness, or None."""
    tol = _tolerance(k)
    dp = d - domain.mid
    a2_rel = domain.rel(a2)
    # outside the tolerance diamond
    dev = abs(c) * float(k) + abs(d - a2)
    if dev.lo > tol.hi:
        return {"type": "tolerance"}
    strip_lo, strip_hi = domain.rel(domain.y_lo).lo, domain.rel(domain.y_hi).hi
    forced: list[_Constraint] = []
    for idx, p in enumerate(probes):
        v = c * p.x + dp
        if p.lo <= v.lo and v.hi <= p.hi:
            return {"type": "obstacle", "probe": idx}
        con = _forced(p, v, strip_lo, strip_hi, idx)
        if con is not None:
            forced.append(con)
    if a2_rel.is_point:
        forced_all = forced + _diamond_constraints(k, a2_rel.lo, tol)
    else:
        forced_all = forced
    for i in range(len(forced)):
        for j in range(i + 1, len(forced_all)):
            w = _pair_refutes(forced[i], forced_all[j], c, dp)
            if w is not None:
                return {
                    "type": "pair",
                    "constraints": [_con_dict(forced[i]), _con_dict(forced_all[j])],
                    "weights": list(w),
                }
    return None


def _con_dict(con: _Constraint) -> dict[str, Any]:
    return {"probe": con.probe, "sense": con.sense, "bound": con.bound, "strict": con.strict}


def _affine_witness_ok(domain: DomainSpec, a2: float, k: int, cc: float, dd: float, probes: Sequence[Probe]) -> bool:
    tol = _tolerance(k)
    dev = abs(Interval.point(cc)) * float(k) + abs(Interval.point(dd) - a2)
    if dev.hi > tol.lo:
        return False
    # cheap float screen at probe abscissae before the interval sweep
    for p in probes:
        v = cc * p.x.mid + (dd - domain.mid)
        if p.lo <= v <= p.hi:
            return False
    return graph_in_domain(domain, Affine(cc, dd), Interval(-float(k), float(k))) is Containment.INSIDE


def _jpaff_for_k(domain: DomainSpec, a: Point2, k: int, depth: int, max_cells: int) -> KResult:
    tol = _tolerance(k)
    probes = affine_probes(domain, k)
    cr = iv.div_up(tol.hi, float(k))
    root_c = Interval(-cr, cr)
    root_d = Interval(iv.add_down(a.x2, -tol.hi), iv.add_up(a.x2, tol.hi))

    # constants first: any L witness lifts (constants are affine)
    lres = _l_for_k(domain, a, k, tol, depth)
    if lres.outcome is Outcome.WITNESS:
        b = lres.payload["b"]
        if _affine_witness_ok(domain, a.x2, k, 0.0, b, probes):
            return KResult(k, Outcome.WITNESS, {"c": 0.0, "d": b, "from": "constant"})

    cells: list[dict[str, Any]] = []
    unknown: list[list[float]] = []
    queue: deque[tuple[Interval, Interval, int, tuple[float, float] | None]] = deque()
    queue.append((root_c, root_d, 0, (0.0, a.x2)))
    examined = 0
    while queue:
        c, d, dep, split_at = queue.popleft()
        examined += 1
        reason = refute_affine_cell(probes, c, d, domain, a.x2, k)
        if reason is not None:
            cells.append({"c": [c.lo, c.hi], "d": [d.lo, d.hi], "reason": reason})
            continue
        cc, dd = split_at if split_at is not None else (c.mid, d.mid)
        if _affine_witness_ok(domain, a.x2, k, cc, dd, probes):
            return KResult(k, Outcome.WITNESS, {"c": cc, "d": dd, "from": "search"})
        if dep >= depth or examined + len(queue) >= max_cells:
            unknown.append([c.lo, c.hi, d.lo, d.hi])
            continue
        for ch in (Interval(c.lo, cc), Interval(cc, c.hi)):
            for dh in (Interval(d.lo, dd), Interval(dd, d.hi)):
                queue.append((ch, dh, dep + 1, None))
    if unknown:
        return KResult(k, Outcome.UNKNOWN, {"unknown_cells": unknown[:100], "n_unknown": len(unknown), "refuted_cells": len(cells)})
    return KResult(
        k,
        Outcome.REFUTED,
        {
            "root": {"c": [root_c.lo, root_c.hi], "d": [root_d.lo, root_d.hi]},
            "probes": [p.to_dict() for p in probes],
            "cells": cells,
        },
    )


@dataclass(frozen=True)
class _JPaffTask:
    domain: DomainSpec
    a: Point2
    depth: int
    max_cells: int

    def __call__(self, k: int) -> KResult:
        return _jpaff_for_k(self.domain, self.a, k, self.depth, self.max_cells)


def check_property_JPaff(
    domain: DomainSpec,
    a: Point2,
    K: int = DEFAULT_K,
    depth: int = DEFAULT_CELL_DEPTH,
    max_cells: int = DEFAULT_MAX_CELLS,
    workers: int = 1,
) -> PropertyReport:
    """Cell search of the diamond ``k|c| + |d - a2| <= 1/k`` for affine graphs inside D."""
    _require_inside(domain, a)
    per_k = _run(_JPaffTask(domain, a, depth, max_cells), range(1, K + 1), workers)
    report = PropertyReport(PropertyKind.JPAFF, a, K, per_k, summarize(per_k), {"depth": depth, "max_cells": max_cells})
    _note_monotonicity(report)
    return report


def check_refutation_cover(payload: dict[str, Any], domain: DomainSpec, a2: float, k: int) -> bool:
    """Re-verify a stored J-P_aff refutation: every cell's reason and the exact cover of the root box."""
    probes = affine_probes(domain, k)
    stored = [
        Probe(Interval(*p["x"]), float(p["lo"]), float(p["hi"]), p["source"]) for p in payload["probes"]
    ]
    if stored != probes:
        return False
    root_c, root_d = Interval(*payload["root"]["c"]), Interval(*payload["root"]["d"])
    area = 0.0
    for cell in payload["cells"]:
        c, d = Interval(*cell["c"]), Interval(*cell["d"])
        if not (root_c.contains(c) and root_d.contains(d)):
            return False
        if refute_affine_cell(probes, c, d, domain, a2, k) is None:
            return False
        area += (c.hi - c.lo) * (d.hi - d.lo)
    total = (root_c.hi - root_c.lo) * (root_d.hi - root_d.lo)
    return abs(area - total) <= 1e-12 * max(total, 1e-300) + 1e-300 and _cells_disjoint(payload["cells"])


def _cells_disjoint(cells: Sequence[dict[str, Any]]) -> bool:
    # with the measure identity, pairwise interior-disjointness makes the union the whole root box
    boxes = sorted((c["c"][0], c["c"][1], c["d"][0], c["d"][1]) for c in cells)
    for i, (c0, c1, d0, d1) in enumerate(boxes):
        for e0, e1, f0, f1 in boxes[i + 1 :]:
            if e0 >= c1:
                break
            if min(c1, e1) > max(c0, e0) and min(d1, f1) > max(d0, f0):
                return False
    return True


def check_l_refutation(payload: dict[str, Any], domain: DomainSpec, k: int) -> bool:
    """Re-verify a stored Property (L) refutation: consecutive cells, each inside a blocked range."""
    blocks = _l_blocking(domain, k)
    lo, hi = payload["range"]
    cur = lo
    for cell in payload["cells"]:
        if cell["lo"] != cur:
            return False
        if not any(blo <= cell["lo"] and cell["hi"] <= bhi and r == cell["reason"] for blo, bhi, r in blocks):
            return False
        cur = cell["hi"]
    return cur == hi


# -- Property (J-P): witnesses --------------------------------------------


class JPVerification(str, enum.Enum):
    VERIFIED = "verified"
    REJECTED = "rejected"
    UNVERIFIED = "unverified"

    def __bool__(self) -> bool:
        return self is JPVerification.VERIFIED


@dataclass(frozen=True)
class AnalyticWitness:
    fn: GraphFunction
    k: int

    def to_dict(self) -> dict[str, Any]:
        return {"k": self.k, "function": self.fn.to_dict()}

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> AnalyticWitness:
        return cls(function_from_dict(data["function"]), int(data["k"]))


def sine_witness(a2: float, k: int) -> AnalyticWitness:
    """``sin(t)/k + a2`` with the coefficient rounded toward zero so the bound ``1/k`` holds exactly."""
    return AnalyticWitness(TrigPolynomial(level=a2, sin_coeffs=(iv.div_down(1.0, float(k)),)), k)


def _deviation_within(fn: GraphFunction, a2: float, k: int, depth: int = 30) -> JPVerification:
    tol = _tolerance(k)
    offset = Interval.point(fn.level) - a2
    if isinstance(fn, TrigPolynomial) and iv.add_up(offset.mag, fn.sup_abs_deviation()) <= tol.lo:
        return JPVerification.VERIFIED
    stack = [(Interval(-float(k), float(k)), 0)]
    while stack:
        t, dep = stack.pop()
        e = abs(offset + fn.deviation(t))
        if e.hi <= tol.lo:
            continue
        pe = abs(offset + fn.deviation(Interval.point(t.mid)))
        if pe.lo > tol.hi:
            return JPVerification.REJECTED
        if dep >= depth:
            return JPVerification.UNVERIFIED
        stack.extend((h, dep + 1) for h in t.bisect())
    return JPVerification.VERIFIED


def verify_jp_witness(domain: DomainSpec, a: Point2, witness: AnalyticWitness) -> JPVerification:
    """Interval check of ``sup |gamma - a2| <= 1/k`` on ``[-k, k]`` and of the graph lying in D."""
    dev = _deviation_within(witness.fn, a.x2, witness.k)
    if dev is not JPVerification.VERIFIED:
        return dev
    status = graph_in_domain(domain, witness.fn, Interval(-float(witness.k), float(witness.k)))
    if status is Containment.INSIDE:
        return JPVerification.VERIFIED
    if status is Containment.NOT_INSIDE:
        return JPVerification.REJECTED
    return JPVerification.UNVERIFIED


def check_jp_witnesses(domain: DomainSpec, a: Point2, K: int = DEFAULT_K) -> PropertyReport:
    """Verify the family ``sin(t)/k + a2`` for every ``k <= K``; only ever reports failure of (J-P)."""
    _require_inside(domain, a)
    per_k = []
    for k in range(1, K + 1):
        w = sine_witness(a.x2, k)
        res = verify_jp_witness(domain, a, w)
        if res:
            per_k.append(KResult(k, Outcome.WITNESS, w.to_dict()))
        else:
            per_k.append(KResult(k, Outcome.UNKNOWN, {**w.to_dict(), "status": res.value}))
    report = PropertyReport(PropertyKind.JPWITNESS, a, K, per_k, summarize(per_k, allow_holds=False), {"family": "sin(t)/k + a2"})
    report.notes.append("bounded witness check only; absence of a witness is not a refutation")
    return report


class _Screen:
    """Float pre-screen of a candidate graph: strip on a grid, slits at their abscissae, teeth on their feet."""

    def __init__(self, domain: DomainSpec, k: int, points_per_unit: int = 16) -> None:
        self.domain = domain
        n = max(32, int(2 * k * points_per_unit))
        self.grid = np.linspace(-k, k, n + 1)
        self.slits = [(s.x.mid, s.span.lo, s.span.hi) for s in domain.slits() if -k <= s.x.mid <= k]
        feet = []
        for t in domain.teeth():
            xs = np.linspace(t.foot.lo, t.foot.hi, 65)
            xs = xs[(xs >= -k) & (xs <= k)]
            if xs.size:
                feet.append(xs)
        self.teeth_x = np.concatenate(feet) if feet else np.empty(0)
        self.cost = self.grid.size + len(self.slits) + self.teeth_x.size

    def __call__(self, fn: GraphFunction) -> bool:
        d = self.domain
        ys = np.array([fn.value(t) for t in self.grid])
        if np.any(ys <= d.y_lo) or np.any(ys >= d.y_hi):
            return False
        for x, s0, s1 in self.slits:
            if s0 <= fn.value(x) <= s1:
                return False
        if self.teeth_x.size:
            ty = np.array([fn.value(t) for t in self.teeth_x])
            from .geometry import contains_many

            if not np.all(contains_many(d, self.teeth_x, ty)):
                return False
        return True


def _candidates(a2: float, k: int, degree: int, rng: np.random.Generator) -> Iterator[TrigPolynomial]:
    alpha = iv.div_down(1.0, float(k))
    yield TrigPolynomial(level=a2)
    for j in range(1, degree + 1):
        for scale in (1.0, 0.5, 0.25):
            for sign in (1.0, -1.0):
                coef = sign * scale * alpha
                yield TrigPolynomial(level=a2, sin_coeffs=(0.0,) * (j - 1) + (coef,))
                yield TrigPolynomial(level=a2, cos_coeffs=(0.0,) * (j - 1) + (coef,))
    for frac in np.linspace(-1.0, 1.0, 33):
        yield TrigPolynomial(level=a2, const=float(frac) * alpha)
    dim = 2 * degree + 1
    shrink = 1.0 - 1e-9
    while True:
        # uniform direction on the l1 sphere scaled by a random radius
        e = rng.exponential(size=dim) * rng.choice((-1.0, 1.0), size=dim)
        v = e / np.sum(np.abs(e)) * rng.uniform() * alpha * shrink
        yield TrigPolynomial(
            level=a2,
            const=float(v[0]),
            sin_coeffs=tuple(float(x) for x in v[1 : degree + 1]),
            cos_coeffs=tuple(float(x) for x in v[degree + 1 :]),
        )


def search_jp_analytic(
    domain: DomainSpec,
    a: Point2,
    k: int,
    degree: int = 1,
    budget: int = DEFAULT_SEARCH_BUDGET,
    seed: int = 0,
) -> AnalyticWitness | None:
    """Best-effort search for a verified trig-polynomial witness with coefficient l1 norm <= 1/k.

    ``budget`` bounds the number of float function evaluations spent screening
    candidates.  ``None`` means nothing was found within the budget; it is not a refutation.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    screen = _Screen(domain, k)
    rng = np.random.default_rng(seed)
    spent = 0
    for fn in _candidates(a.x2, k, degree, rng):
        if spent + screen.cost > budget:
            return None
        spent += screen.cost
        if not screen(fn):
            continue
        w = AnalyticWitness(fn, k)
        if verify_jp_witness(domain, a, w):
            return w
    return None  # pragma: no cover - generator is infinite


# -- re-verification of stored reports ------------------------------------


def _recheck_k(kind: PropertyKind, domain: DomainSpec, a: Point2, k: int, outcome: Outcome, payload: dict[str, Any]) -> bool:
    tol = _tolerance(k)
    if outcome is Outcome.UNKNOWN:
        return True
    if kind is PropertyKind.L:
        if outcome is Outcome.WITNESS:
            b = float(payload["b"])
            return abs(Interval.point(b) - a.x2).hi <= tol.lo and horizontal_segment_in(domain, b, float(k))
        lo, hi = iv.add_down(a.x2, -tol.hi), iv.add_up(a.x2, tol.hi)
        return list(payload["range"]) == [lo, hi] and check_l_refutation(payload, domain, k)
    if kind is PropertyKind.JPAFF:
        if outcome is Outcome.WITNESS:
            return _affine_witness_ok(domain, a.x2, k, float(payload["c"]), float(payload["d"]), affine_probes(domain, k))
        cr = iv.div_up(tol.hi, float(k))
        root = {"c": [-cr, cr], "d": [iv.add_down(a.x2, -tol.hi), iv.add_up(a.x2, tol.hi)]}
        return payload["root"] == root and check_refutation_cover(payload, domain, a.x2, k)
    if outcome is Outcome.WITNESS:
        w = AnalyticWitness.from_dict(payload)
        return w.k == k and bool(verify_jp_witness(domain, a, w))
    return False


def recheck_property_report(data: dict[str, Any], domain: DomainSpec) -> tuple[bool, str]:
    """Re-verify every witness and refutation in a serialized report; no searching."""
    try:
        kind = PropertyKind(data["kind"])
        a = Point2(*map(float, data["base_point"]))
        per_k = [KResult(int(r["k"]), Outcome(r["outcome"]), r["payload"]) for r in data["per_k"]]
        verdict = Verdict(data["verdict"])
    except (KeyError, TypeError, ValueError) as exc:
        return False, f"malformed report: {exc}"
    if [r.k for r in per_k] != list(range(1, int(data["K"]) + 1)):
        return False, f"{kind.value}: k sequence does not run 1..K"
    if summarize(per_k, allow_holds=kind is not PropertyKind.JPWITNESS) is not verdict:
        return False, f"{kind.value}: verdict does not follow from per-k outcomes"
    for r in per_k:
        try:
            ok = _recheck_k(kind, domain, a, r.k, r.outcome, r.payload)
        except (KeyError, TypeError, ValueError):
            ok = False
        if not ok:
            return False, f"{kind.value}: k={r.k} {r.outcome.value} does not re-verify"
    return True, f"{kind.value}: {len(per_k)} entries re-verified"
