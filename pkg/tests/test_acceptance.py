"""Acceptance criteria 1-8, one PASS/FAIL line each (printed and collected in the terminal summary)."""

from __future__ import annotations

import copy
import math
import random
import subprocess
import sys
import time
from pathlib import Path

import numpy as np
import pytest

from conftest import A, ACCEPTANCE_LINES
from tubehyp.geometry import Abscissa, DomainSpec, Point2, VerticalSlit, contains, validate
from tubehyp.interval import Interval
from tubehyp.kobayashi import (
    GnDisc,
    TangentSample,
    strip_metric,
    strip_metric_pullback,
    tube_lower_bound,
    upper_bound_from_disc,
)
from tubehyp.predicates import Verdict, check_property_JPaff, check_property_L
from tubehyp.report import digest, parse, serialize, verify_document
from tubehyp.witness_maps import (
    ContainmentOutcome,
    cr_residuals,
    dg,
    eval_f,
    eval_g,
    jac_f,
    op_norm,
    verify_containment,
)


def record(n: int, ok: bool, detail: str) -> None:
    line = f"criterion {n}: {'PASS' if ok else 'FAIL'}  {detail}"
    ACCEPTANCE_LINES[n] = line
    print(line)
    assert ok, line


def sech(n: float) -> float:
    return 1.0 / math.cosh(n)


def analyze(preset: str, out: Path, *extra: str) -> tuple[int, float, dict]:
    cmd = [sys.executable, "-m", "tubehyp.cli", "analyze", "--preset", preset, "--point", "0,2", "--out", str(out), *extra]
    t0 = time.perf_counter()
    proc = subprocess.run(cmd, capture_output=True, text=True)
    elapsed = time.perf_counter() - t0
    doc = parse((out / "certificate.json").read_text()) if proc.returncode in (0, 3) else {}
    return proc.returncode, elapsed, doc


@pytest.fixture(scope="module")
def documents(tmp_path_factory) -> dict[str, tuple[int, float, Path]]:
    runs = {}
    for preset, extra in (("fig1", ("--K", "20", "--N", "50")), ("fig2", ())):
        out = tmp_path_factory.mktemp(preset)
        code, elapsed, _ = analyze(preset, out, *extra)
        runs[preset] = (code, elapsed, out / "certificate.json")
    return runs


def _pattern(doc: dict) -> tuple[str, str, str, str]:
    p = doc["properties"]
    return p["L"]["verdict"], p["JPaff"]["verdict"], p["JP"]["verdict"], doc["obstruction"]["verdict"]


def test_criterion_1_figure1(documents):
    code, elapsed, path = documents["fig1"]
    doc = parse(path.read_text())
    jpaff = doc["properties"]["JPaff"]
    wit = [r["k"] for r in jpaff["per_k"] if r["outcome"] == "WitnessFound"]
    ref = [r["k"] for r in jpaff["per_k"] if r["outcome"] == "RefutedAtResolution"]
    jp = doc["properties"]["JP"]["per_k"]
    jp_ok = len(jp) == 20 and all(
        r["outcome"] == "WitnessFound" and r["payload"]["function"]["sin"][0] <= 1 / r["k"] and r["payload"]["function"]["level"] == 2.0
        for r in jp
    )
    rows = doc["obstruction"]["rows"]
    ok = (
        code == 0
        and elapsed < 60
        and jpaff["verdict"] == "HoldsUpToK"
        and wit == [1, 2, 3, 4]
        and ref == list(range(5, 21))
        and doc["properties"]["L"]["verdict"] == "HoldsUpToK"
        and jp_ok
        and doc["obstruction"]["verdict"] == "NonHyperbolicityWitness"
        and len(rows) == 50
        and all(r["containment"] == "Contained" for r in rows)
    )
    record(
        1,
        ok,
        f"exit {code} in {elapsed:.1f}s; JPaff {jpaff['verdict']} (witness k={wit[0]}..{wit[-1]}, refuted k={ref[0]}..{ref[-1]}); "
        f"L {doc['properties']['L']['verdict']}; sin(t)/k+2 verified k=1..{len(jp)}; "
        f"{doc['obstruction']['verdict']} with {sum(r['containment'] == 'Contained' for r in rows)}/50 Contained",
    )


def test_criterion_2_derivative_growth():
    worst_cf, worst_fd = 0.0, 0.0
    h = 1e-6
    for n in range(1, 51):
        v = op_norm(jac_f(n, 0j))
        worst_cf = max(worst_cf, abs(v - n * math.sqrt(1 + sech(n) ** 2)) / v)
        fx = [(a - b) / (2 * h) for a, b in zip(eval_f(n, h, mid=0.0).as_tuple(), eval_f(n, -h, mid=0.0).as_tuple())]
        fy = [(a - b) / (2 * h) for a, b in zip(eval_f(n, 1j * h, mid=0.0).as_tuple(), eval_f(n, -1j * h, mid=0.0).as_tuple())]
        fd = np.array([[fx[0], fy[0]], [fx[1], fy[1]]])
        worst_fd = max(worst_fd, np.linalg.norm(fd - jac_f(n, 0j).to_numpy()) / np.linalg.norm(fd))
    at50 = op_norm(jac_f(50, 0j))
    ok = worst_cf <= 1e-10 and worst_fd <= 1e-6 and at50 > 49.9
    record(2, ok, f"closed form rel err {worst_cf:.1e} (<=1e-10), finite differences {worst_fd:.1e} (<=1e-6), op_norm(50) = {at50:.6f}")


def test_criterion_3_containment(fig1, fig1_mut):
    contained = [verify_containment(n, fig1).outcome is ContainmentOutcome.CONTAINED for n in range(1, 51)]
    # oracle: the band at pi/2 is [2 + sech n, 3] (once pi/2 <= n); it meets [0, 2.6] iff sech n <= 0.6
    expected_flip = next(n for n in range(1, 51) if n >= math.pi / 2 and sech(n) <= 0.6)
    outcomes = [verify_containment(n, fig1_mut) for n in range(1, expected_flip + 2)]
    flip = next(c.n for c in outcomes if c.outcome is ContainmentOutcome.NOT_CONTAINED)
    w = outcomes[flip - 1].witness["point"]
    ok = all(contained) and flip == expected_flip == 2 and not contains(fig1_mut, tuple(w))
    record(
        3,
        ok,
        f"fig1 Contained for {sum(contained)}/50 n; mutated slit flips at n={flip} (oracle n={expected_flip}), "
        f"witness ({w[0]:.6f}, {w[1]:.6f}) outside D",
    )


def test_criterion_4_holomorphic_lift():
    worst = 0.0
    grid = np.linspace(-1, 1, 100)
    for n in (1, 5, 20):
        for x in grid:
            for y in grid:
                z = complex(x, y)
                f, g = eval_f(n, z), eval_g(n, z)
                worst = max(worst, abs(g[0].real - f.x1), abs(g[1].real - f.x2))
    ratios = [cr_residuals(n, 0.02)[1] / cr_residuals(n, 0.01)[1] for n in (1, 5, 20)]
    ok = worst <= 1e-12 and all(abs(r - 4) <= 0.4 for r in ratios)
    record(4, ok, f"max |Re g_n - f_n| = {worst:.1e} on 100x100 grid; CR halving ratios {', '.join(f'{r:.4f}' for r in ratios)}")


def test_criterion_5_metric_bracket(fig1):
    rng = random.Random(5)
    worst = 0.0
    for _ in range(1000):
        h = rng.uniform(0.1, 20.0)
        w = complex(h * rng.uniform(0.02, 0.98), h * rng.uniform(-1, 1))
        v = complex(rng.gauss(0, 1), rng.gauss(0, 1))
        ref = strip_metric_pullback(h, w, v)
        worst = max(worst, abs(strip_metric(h, w, v) - ref) / ref)
    lb = tube_lower_bound(fig1, TangentSample(A, (0j, 1 + 0j))).value
    worst_ub = 0.0
    for n in range(10, 51):
        d = dg(n)
        norm = math.hypot(d[0].real, d[1].real)
        ub = upper_bound_from_disc(fig1, GnDisc(n), TangentSample(A, (d[0] / norm, d[1] / norm))).value
        worst_ub = max(worst_ub, abs(ub * n * math.sqrt(1 + sech(n) ** 2) - 1))
    ok = worst <= 1e-9 and abs(lb - math.pi / 8) <= 1e-9 and worst_ub <= 0.05
    record(
        5,
        ok,
        f"closed form vs pullback max rel err {worst:.1e} over 1000 samples; lower bound {lb:.12f} (pi/8 = {math.pi / 8:.12f}); "
        f"upper bounds n=10..50 within {worst_ub:.1e} of 1/(n sqrt(1+sech^2 n))",
    )


def random_slit_spec(rng: np.random.Generator, i: int) -> DomainSpec:
    slits = []
    for _ in range(int(rng.integers(1, 5))):
        x = float(rng.choice([-1.0, 1.0]) * rng.uniform(0.3, 6.0))
        s = float(rng.uniform(1.5, 2.5))
        span = Interval(0.0, s) if rng.random() < 0.5 else Interval(s, 4.0)
        slits.append(VerticalSlit(Abscissa.parse(x), span))
    return validate(DomainSpec(0.0, 4.0, 2.0, tuple(slits), name=f"random-{i}"))


def test_criterion_6_implication_diagram():
    rng = np.random.default_rng(20240601)
    K = 8
    l_fails = jpaff_fails_given_l = forbidden = allowed_mixed = inconclusive = 0
    for i in range(50):
        dom = random_slit_spec(rng, i)
        L = check_property_L(dom, A, K).verdict
        J = check_property_JPaff(dom, A, K).verdict
        inconclusive += Verdict.INCONCLUSIVE in (L, J)
        if L is Verdict.FAILS:
            l_fails += 1
            jpaff_fails_given_l += J is Verdict.FAILS
        forbidden += L is Verdict.FAILS and J is Verdict.HOLDS
        allowed_mixed += J is Verdict.FAILS and L is Verdict.HOLDS
    # the permitted mixed case: horizontal lines are blocked at x = +-1, y = 2 + c x with small c > 0 slips through
    tilted = validate(
        DomainSpec(
            0.0, 4.0, 2.0,
            (VerticalSlit(Abscissa.parse(1.0), Interval(0.0, 2.0)), VerticalSlit(Abscissa.parse(-1.0), Interval(2.0, 4.0))),
            name="tilted",
        )
    )
    mixed = (check_property_L(tilted, A, K).verdict, check_property_JPaff(tilted, A, K).verdict)
    ok = jpaff_fails_given_l == l_fails and forbidden == 0 and mixed == (Verdict.HOLDS, Verdict.FAILS)
    record(
        6,
        ok,
        f"50 random slit specs at K={K}: L FailsUpToK in {l_fails}, JPaff also FailsUpToK in {jpaff_fails_given_l}; "
        f"(L fails, JPaff holds) seen {forbidden} times; (JPaff fails, L holds), which the diagram permits, seen {allowed_mixed} times "
        f"and exhibited by the offset slit pair (L {mixed[0].value}, JPaff {mixed[1].value}); {inconclusive} inconclusive",
    )


def test_criterion_7_figure2(documents):
    code, elapsed, path = documents["fig2"]
    doc = parse(path.read_text())
    fig1_doc = parse(documents["fig1"][2].read_text())
    teeth = doc["domain_checks"]["teeth_avoid_sine"]
    ok = (
        code == 0
        and _pattern(doc) == _pattern(fig1_doc) == ("HoldsUpToK", "HoldsUpToK", "FailsUpToK", "NonHyperbolicityWitness")
        and len(teeth) == 4
        and all(t["verified"] for t in teeth)
    )
    record(7, ok, f"exit {code} in {elapsed:.1f}s; verdicts {'/'.join(_pattern(doc))} (same as fig1); {sum(t['verified'] for t in teeth)}/4 teeth proved to miss sin(x1)+2")


def _leaves(obj, path=()):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _leaves(v, path + (k,))
    elif isinstance(obj, list) and obj:
        for i, v in enumerate(obj):
            yield from _leaves(v, path + (i,))
    else:
        yield path, obj


def _tamper(value):
    if isinstance(value, bool):
        return not value
    if isinstance(value, int):
        return value + 1
    if isinstance(value, float):
        return math.nextafter(value, math.inf)
    if isinstance(value, str):
        return value + "x"
    if value is None:
        return 0
    return [0]  # empty list


def _set(doc, path, value):
    node = doc
    for p in path[:-1]:
        node = node[p]
    node[path[-1]] = value


# each replacement is genuinely wrong, not merely a different valid witness
SEMANTIC = {
    "JPaff witness slope": (("properties", "JPaff", "per_k", 3, "payload", "c"), 0.296875),
    "JPaff refuted cell": (("properties", "JPaff", "per_k", 9, "payload", "cells", 0, "d", 0), 2.15),
    "L witness height": (("properties", "L", "per_k", 0, "payload", "b"), 3.5),  # tolerance at k=1 is 1
    "JP witness coefficient": (("properties", "JP", "per_k", 2, "payload", "function", "sin", 0), 0.5833333333333333),
    "op_norm row": (("obstruction", "rows", 29, "op_norm_df"), 30.25),
    "upper bound row": (("obstruction", "rows", 9, "kobayashi_upper"), 0.35),
    "containment leaf": (("obstruction", "containment", 40, "leaves", 0, 1), -20.25),
    "metric lower bound": (("metric_samples", 0, "lower", "value"), 0.46),
    "domain slit height": (("domain", "obstacles", 0, "span", 1), 2.25),
}


def test_criterion_8_certificate_integrity(documents):
    verified, tampers, detected, semantic_hits = 0, 0, 0, 0
    rng = random.Random(8)
    for name, (code, _, path) in documents.items():
        text = path.read_text()
        doc = parse(text)
        cli = subprocess.run([sys.executable, "-m", "tubehyp.cli", "verify", str(path)], capture_output=True, text=True)
        verified += cli.returncode == 0 and verify_document(doc).ok and serialize(doc) == text
        leaves = list(_leaves(doc))
        for path_, value in rng.sample(leaves, min(400, len(leaves))):
            bad = copy.deepcopy(doc)
            _set(bad, path_, _tamper(value))
            tampers += 1
            detected += not verify_document(bad).ok
        if name == "fig1":
            # digest recomputed: the embedded evidence must catch the change on its own
            for p, value in SEMANTIC.values():
                bad = copy.deepcopy(doc)
                _set(bad, p, value)
                bad["digest"] = digest(bad)
                semantic_hits += not verify_document(bad).ok
    ok = verified == len(documents) and detected == tampers and semantic_hits == len(SEMANTIC)
    record(
        8,
        ok,
        f"{verified}/{len(documents)} documents re-verify (exit 0, byte-identical round trip); "
        f"{detected}/{tampers} single-field tampers detected; {semantic_hits}/{len(SEMANTIC)} semantic tampers caught with the digest recomputed",
    )
