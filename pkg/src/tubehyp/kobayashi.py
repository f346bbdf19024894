"""Two-sided information on the infinitesimal Kobayashi metric of a tube ``T_D``.

Upper bounds come from explicit analytic discs through the point: the lifts
``g_n`` of the harmonic family and small affine discs.  Lower bounds come from
the projection ``(z1, z2) -> z2``, which is holomorphic and maps ``T_D`` into
the vertical strip over ``(y_lo, y_hi)``; the metric of that strip is known in
closed form.  All quantities depend only on the real part of the point since
tubes are invariant under imaginary translations.
"""

from __future__ import annotations

import cmath
import enum
import math
import random
from dataclasses import dataclass, field
from typing import Any, Protocol, Sequence

from .geometry import Box, Containment, DomainSpec, Point2, box_containment, contains, domain_id
from .interval import Interval
from . import interval as iv
from . import witness_maps as wm
from .predicates import (
    PreconditionError,
    PropertyReport,
    Verdict,
    check_jp_witnesses,
    check_property_JPaff,
    check_property_L,
)

DERIVATIVE_RTOL = 1e-10
ORACLE_RTOL = 1e-9
DEFAULT_THRESHOLD_FACTOR = 10.0


class MetricKind(str, enum.Enum):
    UPPER = "Upper"
    LOWER = "Lower"


class ScanVerdict(str, enum.Enum):
    WITNESS = "NonHyperbolicityWitness"
    NONE = "NoObstructionFound"


@dataclass(frozen=True)
class TangentSample:
    """A point ``base + i*imag`` of ``T_D`` and a complex tangent vector ``v``."""

    base: Point2
    v: tuple[complex, complex]
    imag: tuple[float, float] = (0.0, 0.0)

    def to_dict(self) -> dict[str, Any]:
        return {
            "base": list(self.base.as_tuple()),
            "imag": list(self.imag),
            "v": [[c.real, c.imag] for c in map(complex, self.v)],
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> TangentSample:
        return cls(
            Point2(*map(float, data["base"])),
            tuple(complex(float(re), float(im)) for re, im in data["v"]),  # type: ignore[arg-type]
            tuple(map(float, data.get("imag", (0.0, 0.0)))),  # type: ignore[arg-type]
        )


@dataclass(frozen=True)
class MetricBound:
    kind: MetricKind
    value: float
    provenance: str
    evidence: dict[str, Any] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"kind": self.kind.value, "value": self.value, "provenance": self.provenance, "evidence": self.evidence}


# -- disc and strip -----------------------------------------------------------


def disc_metric(z: complex, v: complex) -> float:
    """Poincare density ``|v| / (1 - |z|^2)`` of the unit disc."""
    r2 = abs(z) ** 2
    if not r2 < 1.0:
        raise ValueError(f"|z| = {abs(z)!r} is not inside the unit disc")
    return abs(v) / (1.0 - r2)


def strip_to_disc(h: float, w: complex) -> tuple[complex, complex]:
    """The biholomorphism ``{0 < Re w < h} -> disc`` and its derivative at ``w``.

    ``u = exp(i pi w / h)`` lands in the upper half-plane, then ``(u - i)/(u + i)``.
    """
    u = cmath.exp(1j * math.pi * w / h)
    zeta = (u - 1j) / (u + 1j)
    du = 1j * math.pi / h * u
    dzeta = 2j / (u + 1j) ** 2 * du
    return zeta, dzeta


def strip_metric_pullback(h: float, w: complex, v: complex) -> float:
    """Strip metric computed as the pullback of :func:`disc_metric`."""
    _check_strip(h, w)
    zeta, dzeta = strip_to_disc(h, w)
    return disc_metric(zeta, dzeta * v)


def _check_strip(h: float, w: complex) -> None:
    if not h > 0.0:
        raise ValueError("strip width must be positive")
    if not 0.0 < complex(w).real < h:
        raise ValueError(f"Re w = {complex(w).real!r} is not inside (0, {h!r})")


def _strip_closed_form(h: float, w: complex, v: complex) -> float:
    s = math.sin(math.pi * complex(w).real / h)
    return math.pi * abs(v) / (2.0 * h * s) if s > 0.0 else math.inf


_closed_form_validated = False


def validate_strip_closed_form(samples: int = 256, seed: int = 20240601) -> float:
    """Max relative gap between closed form and pullback on random samples; raises above the tolerance."""
    rng = random.Random(seed)
    worst = 0.0
    for _ in range(samples):
        h = rng.uniform(0.1, 10.0)
        w = complex(h * rng.uniform(0.02, 0.98), h * rng.uniform(-1.0, 1.0))
        v = complex(rng.gauss(0, 1), rng.gauss(0, 1))
        ref = strip_metric_pullback(h, w, v)
        worst = max(worst, abs(_strip_closed_form(h, w, v) - ref) / ref)
    if worst > ORACLE_RTOL:
        raise RuntimeError(f"strip metric closed form disagrees with the pullback ({worst:.3e})")
    return worst


def strip_metric(h: float, w: complex, v: complex) -> float:
    """``pi |v| / (2 h sin(pi Re w / h))``; checked once against the pullback before first use."""
    global _closed_form_validated
    _check_strip(h, w)
    if not _closed_form_validated:
        validate_strip_closed_form()
        _closed_form_validated = True
    return _strip_closed_form(h, w, v)


def half_plane_metric(dist: float, v: complex) -> float:
    """Metric of ``{Re w > 0}`` at distance ``dist`` from the boundary line."""
    if not dist > 0.0:
        raise ValueError("point is not inside the half-plane")
    return abs(v) / (2.0 * dist)


def tube_lower_bound(domain: DomainSpec, s: TangentSample) -> MetricBound:
    """Lower bound from projecting to ``z2`` (a holomorphic map into the strip tube)."""
    x2, v2 = s.base.x2, complex(s.v[1])
    if not domain.y_lo < x2 < domain.y_hi:
        raise PreconditionError("base point is not inside the strip")
    w = complex(x2 - domain.y_lo, s.imag[1])
    if domain.is_bounded_strip:
        val, prov = strip_metric(domain.y_hi - domain.y_lo, w, v2), "projection:z2->strip"
    elif math.isfinite(domain.y_lo):
        val, prov = half_plane_metric(x2 - domain.y_lo, v2), "projection:z2->half-plane"
    elif math.isfinite(domain.y_hi):
        val, prov = half_plane_metric(domain.y_hi - x2, v2), "projection:z2->half-plane"
    else:
        val, prov = 0.0, "projection:none"
    return MetricBound(MetricKind.LOWER, val, prov)


# -- analytic discs ---------------------------------------------------------


class AnalyticDisc(Protocol):
    def center(self) -> tuple[Point2, tuple[float, float]]: ...

    def derivative(self) -> tuple[complex, complex]: ...

    def verify(self, domain: DomainSpec) -> tuple[bool, dict[str, Any]]: ...

    @property
    def ident(self) -> str: ...


@dataclass(frozen=True)
class GnDisc:
    """The lift ``g_n`` restricted to the unit disc."""

    n: int
    mid: float = wm.DEFAULT_MID

    @property
    def ident(self) -> str:
        return f"g_{self.n}"

    def center(self) -> tuple[Point2, tuple[float, float]]:
        z1, z2 = wm.eval_g(self.n, 0j, self.mid)
        return Point2(z1.real, z2.real), (z1.imag, z2.imag)

    def derivative(self) -> tuple[complex, complex]:
        return wm.dg(self.n, 0j)

    def verify(self, domain: DomainSpec) -> tuple[bool, dict[str, Any]]:
        # Re g_n = f_n and the disc sits in Q, so base containment of f_n(Q) suffices
        cert = wm.verify_containment(self.n, domain)
        return cert.contained, {"containment": cert.outcome.value, "n": self.n}


@dataclass(frozen=True)
class AffineDisc:
    """``z -> p + z w`` for ``|z| < 1``; its real parts fill an ellipse inside the box ``p +- |w|``."""

    p: Point2
    w: tuple[complex, complex]

    @property
    def ident(self) -> str:
        return f"affine:{self.w[0]!r},{self.w[1]!r}"

    def center(self) -> tuple[Point2, tuple[float, float]]:
        return self.p, (0.0, 0.0)

    def derivative(self) -> tuple[complex, complex]:
        return self.w

    def box(self) -> Box:
        r1, r2 = abs(self.w[0]), abs(self.w[1])
        r1, r2 = iv.add_up(r1, r1 * 2.0**-52), iv.add_up(r2, r2 * 2.0**-52)
        return Box(
            Interval(iv.add_down(self.p.x1, -r1), iv.add_up(self.p.x1, r1)),
            Interval(iv.add_down(self.p.x2, -r2), iv.add_up(self.p.x2, r2)),
        )

    def verify(self, domain: DomainSpec) -> tuple[bool, dict[str, Any]]:
        b = self.box()
        status = box_containment(domain, b)
        return status is Containment.INSIDE, {"box": [b.x.lo, b.x.hi, b.y.lo, b.y.hi], "status": status.value}


def _positive_multiple(d: Sequence[complex], v: Sequence[complex]) -> float:
    """``r > 0`` with ``d = r v`` (to the derivative tolerance), or 0 if there is none."""
    vv = sum(abs(c) ** 2 for c in v)
    if vv == 0.0:
        raise ValueError("tangent vector must be nonzero")
    r = sum((di * vi.conjugate()) for di, vi in zip(d, v)) / vv
    if abs(r.imag) > DERIVATIVE_RTOL * abs(r) or r.real <= 0.0:
        return 0.0
    resid = math.sqrt(sum(abs(di - r.real * vi) ** 2 for di, vi in zip(d, v)))
    norm_d = math.sqrt(sum(abs(di) ** 2 for di in d))
    return r.real if resid <= DERIVATIVE_RTOL * norm_d else 0.0


def upper_bound_from_disc(domain: DomainSpec, disc: AnalyticDisc, s: TangentSample) -> MetricBound:
    """``1/r`` when ``disc(0) = p``, ``disc'(0) = r v`` and the disc is verified to lie in ``T_D``."""
    base, imag = disc.center()
    if abs(base.x1 - s.base.x1) > 1e-10 or abs(base.x2 - s.base.x2) > 1e-10:
        raise PreconditionError("disc does not pass through the sample point")
    if any(abs(a - b) > 1e-10 for a, b in zip(imag, s.imag)):
        raise PreconditionError("disc does not pass through the sample point")
    d = disc.derivative()
    if all(c == 0 for c in d):
        raise ValueError("constant disc gives no bound")
    r = _positive_multiple(d, [complex(c) for c in s.v])
    if r <= 0.0:
        raise PreconditionError("disc derivative is not a positive multiple of v")
    ok, evidence = disc.verify(domain)
    if not ok:
        raise PreconditionError(f"containment of disc {disc.ident} is not verified")
    return MetricBound(MetricKind.UPPER, 1.0 / r, disc.ident, {**evidence, "r": r})


# -- obstruction certificates -----------------------------------------------


def _unit(d: Sequence[complex]) -> list[float]:
    vec = [c.real for c in d]
    norm = math.hypot(*vec)
    return [c / norm for c in vec]


@dataclass
class ObstructionCertificate:
    domain: str
    a: Point2
    rows: list[dict[str, Any]]
    certificates: list[wm.ContainmentCertificate]
    verdict: ScanVerdict
    threshold: float
    failing_row: dict[str, Any] | None = None
    justification: str = "op_norm(df_n(0)) = n*sqrt(1+sech(n)^2) >= n"

    def to_dict(self) -> dict[str, Any]:
        return {
            "domain": self.domain,
            "a": list(self.a.as_tuple()),
            "rows": self.rows,
            "containment": [c.to_dict() for c in self.certificates],
            "verdict": self.verdict.value,
            "threshold": self.threshold,
            "failing_row": self.failing_row,
            "justification": self.justification,
        }

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> ObstructionCertificate:
        return cls(
            domain=str(data["domain"]),
            a=Point2(*map(float, data["a"])),
            rows=list(data["rows"]),
            certificates=[wm.ContainmentCertificate.from_dict(c) for c in data["containment"]],
            verdict=ScanVerdict(data["verdict"]),
            threshold=float(data["threshold"]),
            failing_row=data.get("failing_row"),
            justification=str(data.get("justification", "")),
        )


def _row(n: int, cert: wm.ContainmentCertificate, mid: float) -> dict[str, Any]:
    jac = wm.jac_f(n, 0j)
    d = wm.dg(n, 0j)
    row: dict[str, Any] = {
        "n": n,
        "containment": cert.outcome.value,
        "certificate_ref": f"containment[{n - 1}]",
        "op_norm_df": wm.op_norm(jac),
        "frobenius_df": wm.frobenius_norm(jac),
        "closed_form": wm.op_norm_at_origin(n),
        "direction": _unit(d),
        "kobayashi_upper": None,
        "f_n_0": list(wm.eval_f(n, 0j, mid).as_tuple()),
    }
    return row


def _scan_verdict(rows: Sequence[dict[str, Any]], a: Point2, threshold: float, complete: bool) -> ScanVerdict:
    if not complete or not rows:
        return ScanVerdict.NONE
    if any(r["containment"] != wm.ContainmentOutcome.CONTAINED.value for r in rows):
        return ScanVerdict.NONE
    if any(r["f_n_0"] != [a.x1, a.x2] for r in rows):
        return ScanVerdict.NONE
    norms = [r["op_norm_df"] for r in rows]
    if any(b <= a_ for a_, b in zip(norms, norms[1:])):
        return ScanVerdict.NONE
    return ScanVerdict.WITNESS if norms[-1] >= threshold else ScanVerdict.NONE


def obstruction_scan(
    domain: DomainSpec,
    a: Point2,
    N: int,
    threshold: float | None = None,
    depth: int = wm.DEFAULT_DEPTH,
) -> ObstructionCertificate:
    """Run the family for ``n = 1..N``; stops at the first row whose containment is not proved."""
    if N < 1:
        raise ValueError("N must be at least 1")
    if not contains(domain, a):
        raise PreconditionError(f"base point {a.as_tuple()} is not in the domain")
    if (a.x1, a.x2) != (0.0, domain.mid):
        raise PreconditionError("the built-in family is centred at (0, mid)")
    first = wm.op_norm_at_origin(1)
    thr = DEFAULT_THRESHOLD_FACTOR * first if threshold is None else float(threshold)
    rows: list[dict[str, Any]] = []
    certs: list[wm.ContainmentCertificate] = []
    failing = None
    for n in range(1, N + 1):
        cert = wm.verify_containment(n, domain, depth=depth)
        row = _row(n, cert, domain.mid)
        if cert.contained:
            d = wm.dg(n, 0j)
            s = TangentSample(a, tuple(complex(c) for c in _unit(d)))  # type: ignore[arg-type]
            row["kobayashi_upper"] = upper_bound_from_disc(domain, _CertifiedGn(n, domain.mid, cert), s).value
        rows.append(row)
        certs.append(cert)
        if not cert.contained:
            failing = row
            break
    verdict = _scan_verdict(rows, a, thr, failing is None)
    return ObstructionCertificate(domain_id(domain), a, rows, certs, verdict, thr, failing)


@dataclass(frozen=True)
class _CertifiedGn(GnDisc):
    # reuses a containment certificate already produced by the scan
    cert: wm.ContainmentCertificate | None = None

    def verify(self, domain: DomainSpec) -> tuple[bool, dict[str, Any]]:
        assert self.cert is not None
        return self.cert.contained, {"containment": self.cert.outcome.value, "n": self.n}


def recheck_obstruction(data: dict[str, Any], domain: DomainSpec) -> tuple[bool, str]:
    """Re-validate an obstruction certificate from its rows and stored containment evidence."""
    try:
        cert = ObstructionCertificate.from_dict(data)
    except (KeyError, TypeError, ValueError) as exc:
        return False, f"malformed obstruction certificate: {exc}"
    if cert.domain != domain_id(domain):
        return False, "obstruction: domain id mismatch"
    if len(cert.rows) != len(cert.certificates):
        return False, "obstruction: rows and containment records differ in number"
    for i, (row, c) in enumerate(zip(cert.rows, cert.certificates)):
        n = i + 1
        if row.get("n") != n or c.n != n:
            return False, f"obstruction: row {i} is not n={n}"
        ok, why = wm.recheck_containment(c, domain)
        if not ok:
            return False, f"obstruction row n={n}: {why}"
        expected = _row(n, c, domain.mid)
        if c.contained:
            expected["kobayashi_upper"] = 1.0 / math.sqrt(sum(abs(x) ** 2 for x in wm.dg(n, 0j)))
        for key in ("containment", "certificate_ref", "op_norm_df", "frobenius_df", "closed_form", "direction", "f_n_0"):
            if row.get(key) != expected[key]:
                return False, f"obstruction row n={n}: field {key!r} does not recompute"
        ku = row.get("kobayashi_upper")
        ek = expected["kobayashi_upper"]
        if (ku is None) != (ek is None) or (ek is not None and abs(ku - ek) > 1e-12 * ek):
            return False, f"obstruction row n={n}: field 'kobayashi_upper' does not recompute"
    complete = cert.failing_row is None
    if not complete and cert.failing_row != cert.rows[-1]:
        return False, "obstruction: failing row is not the last row"
    if _scan_verdict(cert.rows, cert.a, cert.threshold, complete) is not cert.verdict:
        return False, "obstruction: verdict does not follow from the rows"
    return True, f"obstruction: {len(cert.rows)} rows re-verified"


# -- metric samples and the aggregate report --------------------------------


def affine_disc_along(domain: DomainSpec, p: Point2, v: tuple[complex, complex], halvings: int = 40) -> AffineDisc | None:
    """The largest ``z -> p + z * rho * v`` (rho halved from the strip width) proved to lie in ``T_D``."""
    scale = math.sqrt(sum(abs(c) ** 2 for c in v))
    rho = (domain.y_hi - domain.y_lo) / 2.0 if domain.is_bounded_strip else 1.0
    rho /= scale
    for _ in range(halvings):
        disc = AffineDisc(p, (v[0] * rho, v[1] * rho))
        if disc.verify(domain)[0]:
            return disc
        rho *= 0.5
    return None


def metric_samples(domain: DomainSpec, a: Point2, ns: Sequence[int]) -> list[dict[str, Any]]:
    """Lower/upper bracket at ``a`` along the g_n directions and along ``(0, 1)``."""
    out = []
    for n in ns:
        d = wm.dg(n, 0j)
        s = TangentSample(a, tuple(complex(c) for c in _unit(d)))  # type: ignore[arg-type]
        lower = tube_lower_bound(domain, s)
        try:
            upper: MetricBound | None = upper_bound_from_disc(domain, GnDisc(n, domain.mid), s)
        except PreconditionError:
            upper = None
        out.append(_sample_dict(s, lower, upper))
    s = TangentSample(a, (0j, 1 + 0j))
    disc = affine_disc_along(domain, a, s.v)
    upper = upper_bound_from_disc(domain, disc, s) if disc is not None else None
    out.append(_sample_dict(s, tube_lower_bound(domain, s), upper))
    return out


def _sample_dict(s: TangentSample, lower: MetricBound, upper: MetricBound | None) -> dict[str, Any]:
    return {
        "sample": s.to_dict(),
        "lower": lower.to_dict(),
        "upper": None if upper is None else upper.to_dict(),
        "consistent": upper is None or lower.value <= upper.value + 1e-12,
    }


def _disc_from_provenance(prov: str, s: TangentSample, evidence: dict[str, Any], mid: float) -> AnalyticDisc:
    if prov.startswith("g_"):
        return GnDisc(int(prov[2:]), mid)
    r = float(evidence["r"])
    return AffineDisc(s.base, (s.v[0] * r, s.v[1] * r))


def recheck_metric_sample(data: dict[str, Any], domain: DomainSpec) -> tuple[bool, str]:
    try:
        s = TangentSample.from_dict(data["sample"])
        lower = tube_lower_bound(domain, s)
        if lower.to_dict() != data["lower"]:
            return False, "metric sample: lower bound does not recompute"
        up = data["upper"]
        if up is not None:
            disc = _disc_from_provenance(up["provenance"], s, up["evidence"], domain.mid)
            ub = upper_bound_from_disc(domain, disc, s)
            if abs(ub.value - float(up["value"])) > 1e-12 * ub.value:
                return False, "metric sample: upper bound does not recompute"
            if lower.value > ub.value + 1e-12:
                return False, "metric sample: bracket inconsistent"
    except (KeyError, TypeError, ValueError) as exc:
        return False, f"metric sample: {exc}"
    return True, "metric sample re-verified"


@dataclass(frozen=True)
class ReportConfig:
    K: int = 20
    N: int = 50
    depth: int = 30
    max_cells: int = 50_000
    threshold: float | None = None
    metric_ns: tuple[int, ...] = (1, 10, 50)
    workers: int = 1


@dataclass
class HyperbolicityReport:
    domain: DomainSpec
    a: Point2
    L: PropertyReport
    JPaff: PropertyReport
    JP: PropertyReport
    obstruction: ObstructionCertificate
    metric: list[dict[str, Any]]
    checks: list[dict[str, Any]]

    def to_dict(self) -> dict[str, Any]:
        return {
            "a": list(self.a.as_tuple()),
            "properties": {"L": self.L.to_dict(), "JPaff": self.JPaff.to_dict(), "JP": self.JP.to_dict()},
            "obstruction": self.obstruction.to_dict(),
            "metric_samples": self.metric,
            "diagram_checks": self.checks,
        }


def diagram_checks(L: Verdict, JPaff: Verdict, JP: Verdict, obstruction: ScanVerdict) -> list[dict[str, Any]]:
    """Consistency of computed verdicts with the implications between the properties and hyperbolicity."""
    H, F = Verdict.HOLDS, Verdict.FAILS
    witness = obstruction is ScanVerdict.WITNESS
    checks = [
        ("(L) fails => (J-P)_aff fails", not (L is F and JPaff is H)),
        ("(J-P)_aff fails => (J-P) fails", not (JPaff is F and JP is H)),
        ("non-hyperbolic => (J-P) fails", not (witness and JP is H)),
    ]
    out = [{"implication": name, "consistent": ok} for name, ok in checks]
    out.append(
        {
            "implication": "(J-P)_aff holds and T_D not hyperbolic (affine condition not sufficient)",
            "consistent": True,
            "exhibited": JPaff is H and witness,
        }
    )
    return out


def hyperbolicity_report(domain: DomainSpec, a: Point2, config: ReportConfig = ReportConfig()) -> HyperbolicityReport:
    L = check_property_L(domain, a, config.K, depth=config.depth, workers=config.workers)
    JPaff = check_property_JPaff(domain, a, config.K, depth=config.depth, max_cells=config.max_cells, workers=config.workers)
    JP = check_jp_witnesses(domain, a, config.K)
    obs = obstruction_scan(domain, a, config.N, config.threshold)
    ns = sorted({n for n in config.metric_ns if n <= config.N})
    samples = metric_samples(domain, a, ns)
    checks = diagram_checks(L.verdict, JPaff.verdict, JP.verdict, obs.verdict)
    return HyperbolicityReport(domain, a, L, JPaff, JP, obs, samples, checks)
