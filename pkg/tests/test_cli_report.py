"""Spec files, certificate documents and the command-line front end."""

from __future__ import annotations

import copy
import csv
import io
import json
import re
import subprocess
import sys
from pathlib import Path

import pytest

from tubehyp.cli import EXIT_BUDGET, EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, main
from tubehyp.geometry import GeometryError, build_figure1, build_figure2
from tubehyp.report import DocumentError, digest, parse, serialize, verify_document
from tubehyp.specfile import SpecError, domain_from_toml, parse_spec, preset

SMALL = ["--K", "6", "--N", "12"]

SLIT_SPEC = """\
name = "one-slit"

[strip]
y_lo = 0.0
y_hi = 4.0
mid = 2.0

[[obstacles]]
kind = "slit"
x = "1/2*pi"
span = [0.0, 2.0]
"""


def run(*args: str) -> int:
    return main(list(args))


@pytest.fixture(scope="module")
def fig1_doc(tmp_path_factory) -> Path:
    out = tmp_path_factory.mktemp("fig1")
    assert run("analyze", "--preset", "fig1", "--point", "0,2", *SMALL, "--out", str(out), "--format", "json,csv,svg") == EXIT_OK
    return out / "certificate.json"


# -- spec files -------------------------------------------------------------------


def test_presets_match_builders():
    assert domain_from_toml('preset = "fig1"').to_dict() == build_figure1().to_dict()
    assert domain_from_toml('preset = "fig2"').to_dict() == build_figure2().to_dict()
    assert preset("strip").obstacles == ()
    with pytest.raises(SpecError):
        preset("fig3")


def test_explicit_spec(tmp_path):
    p = tmp_path / "one.toml"
    p.write_text(SLIT_SPEC)
    dom = parse_spec(p)
    assert dom.name == "one-slit" and len(dom.slits()) == 1
    assert dom.slits()[0].abscissa.expr == "1/2*pi"


def test_fig2_teeth_override():
    text = 'preset = "fig2"\n' + "".join(
        f'[[teeth]]\napex = "{a}"\nhalf_width = 1.0\n' for a in ("-3/2*pi", "-1/2*pi", "1/2*pi", "3/2*pi")
    )
    dom = domain_from_toml(text)
    assert [t.half_width for t in dom.teeth()] == [1.0] * 4


@pytest.mark.parametrize(
    "text, field, line",
    [
        (SLIT_SPEC.replace('kind = "slit"', 'kind = "hole"'), "obstacles[0].kind", 9),
        (SLIT_SPEC.replace("y_hi = 4.0\n", ""), "strip.y_hi", None),
        (SLIT_SPEC.replace("span = [0.0, 2.0]", 'span = "low"'), "obstacles[0].span", 11),
        (SLIT_SPEC + "colour = 3\n", "obstacles[0].colour", 12),
        ('preset = "fig9"\n', "preset", 1),
        ('preset = "fig1"\n[[teeth]]\napex = 1.0\n', "teeth", 2),
    ],
)
def test_spec_errors_name_field(text, field, line):
    with pytest.raises(SpecError) as info:
        domain_from_toml(text)
    assert info.value.field == field
    if line is not None:
        assert info.value.line == line
        assert f"line {line}" in str(info.value)


def test_spec_syntax_and_geometry_errors():
    with pytest.raises(SpecError):
        domain_from_toml("[strip\n")
    wall = SLIT_SPEC.replace("span = [0.0, 2.0]", "span = [0.0, 4.0]")
    with pytest.raises(GeometryError, match="connected"):
        domain_from_toml(wall)


# -- documents ----------------------------------------------------------------------


def test_round_trip_is_byte_identical(fig1_doc):
    text = fig1_doc.read_text()
    assert serialize(parse(text)) == text
    assert text.endswith("\n") and "\n" not in text[:-1]


def test_document_contents(fig1_doc):
    doc = parse(fig1_doc.read_text())
    assert doc["schema_version"] == 1
    assert doc["digest"] == digest(doc)
    assert doc["properties"]["L"]["verdict"] == "HoldsUpToK"
    assert doc["properties"]["JPaff"]["verdict"] == "HoldsUpToK"
    assert doc["properties"]["JP"]["verdict"] == "FailsUpToK"
    assert doc["obstruction"]["verdict"] == "NonHyperbolicityWitness"
    assert doc["reproducibility"]["K"] == 6 and doc["reproducibility"]["N"] == 12
    # the document never claims hyperbolicity, only an obstruction or its absence
    assert doc["obstruction"]["verdict"] in {"NonHyperbolicityWitness", "NoObstructionFound"}
    assert '"Hyperbolic"' not in json.dumps(doc)


def test_verify_fresh_document(fig1_doc):
    res = verify_document(parse(fig1_doc.read_text()))
    assert res.ok, res.first_failure
    assert run("verify", str(fig1_doc)) == EXIT_OK


def test_stale_schema(fig1_doc, tmp_path, capsys):
    doc = parse(fig1_doc.read_text())
    doc["schema_version"] = 0
    p = tmp_path / "old.json"
    p.write_text(serialize(doc))
    assert run("verify", str(p)) == EXIT_VALIDATION
    assert "migrate" in capsys.readouterr().err
    with pytest.raises(DocumentError, match="migrate"):
        verify_document(doc)


def test_tampered_op_norm(fig1_doc, tmp_path, capsys):
    doc = parse(fig1_doc.read_text())
    doc["obstruction"]["rows"][4]["op_norm_df"] = 5.5
    p = tmp_path / "bad.json"
    p.write_text(serialize(doc))
    assert run("verify", str(p)) == EXIT_VALIDATION
    assert "digest" in capsys.readouterr().err
    # with a recomputed digest the semantic check still catches it
    doc["digest"] = digest(doc)
    res = verify_document(doc)
    assert not res.ok and res.first_failure[0] == "obstruction"


def test_semantic_tampers_are_located(fig1_doc):
    base = parse(fig1_doc.read_text())
    cases = {
        "properties.JPaff": lambda d: d["properties"]["JPaff"]["per_k"][0]["payload"].__setitem__("d", 3.5),
        "properties.L": lambda d: d["properties"]["L"]["per_k"][0]["payload"].__setitem__("b", 0.5),
        "metric_samples[0]": lambda d: d["metric_samples"][0]["lower"].__setitem__("value", 0.1),
        "domain_id": lambda d: d.__setitem__("domain_id", "fig1:0000000000000000"),
        "diagram_checks": lambda d: d["diagram_checks"][0].__setitem__("consistent", False),
    }
    for where, mutate in cases.items():
        doc = copy.deepcopy(base)
        mutate(doc)
        doc["digest"] = digest(doc)
        res = verify_document(doc)
        assert not res.ok
        assert res.first_failure[0] == where, (where, res.first_failure)


def test_malformed_document(tmp_path):
    p = tmp_path / "x.json"
    p.write_text("{not json")
    assert run("verify", str(p)) == EXIT_VALIDATION
    assert run("verify", str(tmp_path / "missing.json")) == EXIT_USAGE


# -- CSV and SVG ----------------------------------------------------------------------


def test_csv_outputs(fig1_doc):
    out = fig1_doc.parent
    rows = list(csv.reader(io.StringIO((out / "metric.csv").read_text())))
    assert rows[0] == ["n", "op_norm", "upper_bound"]
    assert len(rows) == 13
    assert float(rows[-1][1]) == pytest.approx(12.0, rel=1e-9)
    band = list(csv.reader(io.StringIO((out / "band.csv").read_text())))
    assert band[0] == ["x1", "band_lo", "band_hi"]
    for x, lo, hi in band[1:]:
        assert float(lo) <= float(hi)


def test_plot_fig1_and_fig2(tmp_path):
    assert run("plot", "--preset", "fig1", "--n", "3", "--out", str(tmp_path / "a")) == EXIT_OK
    svg = (tmp_path / "a" / "figure.svg").read_text()
    assert svg.count('class="slit"') == 4 and svg.count('class="band"') == 1
    assert svg.count('class="graph-sin"') == 1 and svg.count('class="graph-sech"') == 1
    assert run("plot", "--preset", "fig2", "--n", "3", "--out", str(tmp_path / "b")) == EXIT_OK
    svg2 = (tmp_path / "b" / "figure.svg").read_text()
    assert svg2.count('class="tooth"') == 4 and 'class="slit"' not in svg2
    assert re.search(r"<title>fig2: image band of f_3</title>", svg2)


# -- exit codes ---------------------------------------------------------------------


def test_exit_codes(tmp_path, capsys):
    assert run("analyze", "--preset", "fig1", "--point", "10,10", "--out", str(tmp_path)) == EXIT_VALIDATION
    assert "not in the domain" in capsys.readouterr().err
    assert run("plot", "--preset", "fig1", "--n", "0", "--out", str(tmp_path)) == EXIT_USAGE
    assert run("frobnicate") == EXIT_USAGE
    assert run("analyze", "--preset", "fig1", "--K", "0") == EXIT_USAGE
    assert run("analyze", "--spec", str(tmp_path / "none.toml")) == EXIT_USAGE
    assert run("presets") == EXIT_OK
    bad = tmp_path / "bad.toml"
    bad.write_text(SLIT_SPEC.replace('kind = "slit"', 'kind = "hole"'))
    assert run("analyze", "--spec", str(bad)) == EXIT_VALIDATION
    assert "obstacles[0].kind" in capsys.readouterr().err


def test_budget_exhaustion_exit_code(tmp_path):
    # a starved cell budget leaves J-P_aff entries Unknown; the document is still written
    code = run("analyze", "--preset", "fig1", "--K", "8", "--N", "3", "--max-cells", "1", "--out", str(tmp_path))
    assert code == EXIT_BUDGET
    doc = parse((tmp_path / "certificate.json").read_text())
    assert any(r["outcome"] == "Unknown" for r in doc["properties"]["JPaff"]["per_k"])
    assert verify_document(doc).ok


def test_strip_spec_end_to_end(tmp_path):
    spec = tmp_path / "strip.toml"
    spec.write_text('name = "strip"\n[strip]\ny_lo = 0.0\ny_hi = 4.0\nmid = 2.0\n')
    assert run("analyze", "--spec", str(spec), "--point", "0,2", *SMALL, "--out", str(tmp_path)) == EXIT_OK
    doc = parse((tmp_path / "certificate.json").read_text())
    assert doc["properties"]["JPaff"]["verdict"] == "FailsUpToK"
    assert doc["obstruction"]["verdict"] == "NonHyperbolicityWitness"


def test_console_script(tmp_path):
    proc = subprocess.run(
        [sys.executable, "-m", "tubehyp.cli", "presets"], capture_output=True, text=True, check=False
    )
    assert proc.returncode == 0 and "fig2" in proc.stdout
    proc = subprocess.run(
        [sys.executable, "-m", "tubehyp.cli", "plot", "--preset", "fig1", "--n", "0"], capture_output=True, text=True
    )
    assert proc.returncode == 1
