"""Certificate documents: canonical JSON, a content digest, and re-verification.

A document is serialized with sorted keys, no insignificant whitespace and
shortest round-trip float text, so ``serialize(parse(text)) == text`` byte for
byte.  Non-finite floats (an unbounded strip) are written as the strings
``"inf"``/``"-inf"``.  The embedded SHA-256 digest covers every other field;
verification additionally recomputes each witness, refutation, containment
row and metric bound from the stored data without searching.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from typing import Any

from . import __version__
from .geometry import DomainSpec, GeometryError, Point2, contains, domain_from_dict, domain_id, tooth_avoids_sine, validate
from .kobayashi import (
    HyperbolicityReport,
    ReportConfig,
    ScanVerdict,
    diagram_checks,
    recheck_metric_sample,
    recheck_obstruction,
)
from .predicates import Verdict, recheck_property_report

SCHEMA_VERSION = 1
TOOL_NAME = "tubehyp"


class DocumentError(ValueError):
    """A certificate document that cannot be read or fails verification."""


def _finite_safe(obj: Any) -> Any:
    if isinstance(obj, float):
        if math.isfinite(obj):
            return obj
        if math.isnan(obj):
            raise DocumentError("NaN cannot be stored in a certificate")
        return "inf" if obj > 0 else "-inf"
    if isinstance(obj, dict):
        return {str(k): _finite_safe(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_finite_safe(v) for v in obj]
    return obj


def canonical_json(obj: Any) -> str:
    return json.dumps(_finite_safe(obj), sort_keys=True, separators=(",", ":"), ensure_ascii=True, allow_nan=False)


def digest(doc: dict[str, Any]) -> str:
    body = {k: v for k, v in doc.items() if k != "digest"}
    return hashlib.sha256(canonical_json(body).encode("ascii")).hexdigest()


def serialize(doc: dict[str, Any]) -> str:
    return canonical_json(doc) + "\n"


def parse(text: str) -> dict[str, Any]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"not valid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise DocumentError("top level must be an object")
    return doc


def domain_checks(domain: DomainSpec) -> dict[str, Any]:
    """Interval proofs that each tooth misses the graph of ``sin(x1) + mid``."""
    return {
        "teeth_avoid_sine": [
            {"index": i, "verified": tooth_avoids_sine(domain, ob)}
            for i, ob in enumerate(domain.obstacles)
            if ob.kind == "tooth"
        ]
    }


def build_document(report: HyperbolicityReport, config: ReportConfig) -> dict[str, Any]:
    body = report.to_dict()
    doc = {
        "schema_version": SCHEMA_VERSION,
        "tool": {"name": TOOL_NAME, "version": __version__},
        "domain": report.domain.to_dict(),
        "domain_id": domain_id(report.domain),
        "domain_checks": domain_checks(report.domain),
        **body,
        "reproducibility": {
            "K": config.K,
            "N": config.N,
            "depth": config.depth,
            "max_cells": config.max_cells,
            "threshold": config.threshold,
            "metric_ns": list(config.metric_ns),
            "seed": None,
        },
    }
    doc = json.loads(canonical_json(doc))
    doc["digest"] = digest(doc)
    return doc


def summary(doc: dict[str, Any]) -> dict[str, str]:
    props = doc["properties"]
    return {
        "L": props["L"]["verdict"],
        "JPaff": props["JPaff"]["verdict"],
        "JP": props["JP"]["verdict"],
        "obstruction": doc["obstruction"]["verdict"],
    }


@dataclass
class VerifyResult:
    items: list[tuple[str, bool, str]] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(ok for _, ok, _ in self.items)

    @property
    def first_failure(self) -> tuple[str, str] | None:
        return next(((name, msg) for name, ok, msg in self.items if not ok), None)

    def add(self, name: str, ok: bool, msg: str) -> bool:
        self.items.append((name, ok, msg))
        return ok


def check_schema(doc: dict[str, Any]) -> None:
    version = doc.get("schema_version")
    if version != SCHEMA_VERSION:
        hint = (
            f"document has schema_version {version!r} but this tool reads version {SCHEMA_VERSION}; "
            "migrate by re-running `tubehyp analyze` with the budgets listed under 'reproducibility'"
        )
        raise DocumentError(hint)


def verify_document(doc: dict[str, Any], stop_early: bool = True) -> VerifyResult:
    """Re-verify every embedded claim; the first failing item is reported first."""
    res = VerifyResult()
    check_schema(doc)
    if not res.add("digest", doc.get("digest") == digest(doc), "content digest"):
        if stop_early:
            return res
    try:
        domain = validate(domain_from_dict(doc["domain"]))
        a = Point2(*map(float, doc["a"]))
    except (KeyError, TypeError, ValueError, GeometryError) as exc:
        res.add("domain", False, f"domain echo does not load: {exc}")
        return res
    if not res.add("domain_id", doc.get("domain_id") == domain_id(domain), "domain id"):
        if stop_early:
            return res
    res.add("base_point", contains(domain, a), "base point lies in D")
    checks_ok = doc.get("domain_checks") == domain_checks(domain)
    if not res.add("domain_checks", checks_ok, "tooth/sine disjointness recomputes") and stop_early:
        return res
    for k in ("L", "JPaff", "JP"):
        same = doc.get("properties", {}).get(k, {}).get("base_point") == doc["a"]
        if not res.add(f"properties.{k}.base_point", same, "report centred at the document point") and stop_early:
            return res

    checks: list[tuple[str, Any]] = [
        *((f"properties.{k}", lambda k=k: recheck_property_report(doc["properties"][k], domain)) for k in ("L", "JPaff", "JP")),
        ("obstruction", lambda: recheck_obstruction(doc["obstruction"], domain)),
        *(
            (f"metric_samples[{i}]", lambda m=m: recheck_metric_sample(m, domain))
            for i, m in enumerate(doc.get("metric_samples", []))
        ),
    ]
    for name, fn in checks:
        try:
            ok, msg = fn()
        except (KeyError, TypeError, ValueError) as exc:
            ok, msg = False, f"malformed: {exc}"
        if not res.add(name, ok, msg) and stop_early:
            return res
    try:
        props = doc["properties"]
        expected = diagram_checks(
            Verdict(props["L"]["verdict"]),
            Verdict(props["JPaff"]["verdict"]),
            Verdict(props["JP"]["verdict"]),
            ScanVerdict(doc["obstruction"]["verdict"]),
        )
        ok = expected == doc.get("diagram_checks")
    except (KeyError, ValueError):
        ok = False
    res.add("diagram_checks", ok, "implication checks recompute")
    return res
