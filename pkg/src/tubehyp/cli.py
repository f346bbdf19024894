"""Command-line front end.

Exit codes: 0 success, 1 usage or configuration error, 2 spec or certificate
validation failure, 3 a search budget ran out (the document is still written).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path
from typing import Sequence

from . import __version__, kernels
from .geometry import GeometryError, Point2, contains
from .kobayashi import ReportConfig, hyperbolicity_report
from .plotting import band_csv, domain_svg, metric_csv
from .predicates import PreconditionError
from .report import DocumentError, build_document, parse, serialize, summary, verify_document
from .specfile import PRESET_HELP, SpecError, parse_spec, preset
from .witness_maps import ContainmentOutcome

EXIT_OK, EXIT_USAGE, EXIT_VALIDATION, EXIT_BUDGET = 0, 1, 2, 3
FORMATS = ("json", "csv", "svg")


class UsageError(Exception):
    pass


def _point(text: str) -> Point2:
    try:
        x, y = (float(v) for v in text.split(","))
        return Point2(x, y)
    except (ValueError, GeometryError):
        raise argparse.ArgumentTypeError(f"expected x,y with two finite numbers, got {text!r}") from None


def _positive(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {v}")
    return v


def _formats(text: str) -> tuple[str, ...]:
    fmts = tuple(f.strip() for f in text.split(",") if f.strip())
    bad = [f for f in fmts if f not in FORMATS]
    if bad or not fmts:
        raise argparse.ArgumentTypeError(f"formats must be drawn from {','.join(FORMATS)}")
    return fmts


def _add_domain_args(p: argparse.ArgumentParser) -> None:
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--spec", type=Path, help="domain spec file (TOML)")
    g.add_argument("--preset", choices=sorted(PRESET_HELP), help="built-in domain")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="tubehyp", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__} ({kernels.BACKEND} kernels)")
    sub = parser.add_subparsers(dest="command", required=True)

    an = sub.add_parser("analyze", help="property checks, obstruction scan and metric bracket at a point")
    _add_domain_args(an)
    an.add_argument("--point", type=_point, default=None, help="base point x,y (default 0,mid)")
    an.add_argument("--K", type=_positive, default=20, help="largest k for the property checks")
    an.add_argument("--N", type=_positive, default=50, help="largest n for the obstruction scan")
    an.add_argument("--depth", type=_positive, default=30, help="subdivision depth budget")
    an.add_argument("--max-cells", type=_positive, default=50_000, help="cell budget per k for the affine search")
    an.add_argument("--workers", type=_positive, default=1, help="processes for the per-k searches")
    an.add_argument("--plot-n", type=_positive, default=3, help="family index drawn in the figure")
    an.add_argument("--out", type=Path, default=Path("tubehyp-out"), help="output directory")
    an.add_argument("--format", type=_formats, default=("json",), help="comma list of json,csv,svg")

    pl = sub.add_parser("plot", help="SVG of the domain with the image band of f_n, plus band CSV")
    _add_domain_args(pl)
    pl.add_argument("--n", "--N", dest="n", type=int, default=3, help="family index (n >= 1)")
    pl.add_argument("--out", type=Path, default=Path("tubehyp-out"))
    pl.add_argument("--format", type=_formats, default=("svg", "csv"))

    ve = sub.add_parser("verify", help="re-verify a certificate document")
    ve.add_argument("document", type=Path)

    sub.add_parser("presets", help="list built-in domains")
    return parser


def _load_domain(args: argparse.Namespace):
    if args.spec is not None:
        if not args.spec.is_file():
            raise UsageError(f"spec file not found: {args.spec}")
        return parse_spec(args.spec)
    return preset(args.preset)


def _write(out: Path, name: str, text: str) -> Path:
    out.mkdir(parents=True, exist_ok=True)
    path = out / name
    path.write_text(text, encoding="utf-8")
    return path


def cmd_analyze(args: argparse.Namespace) -> int:
    domain = _load_domain(args)
    a = args.point if args.point is not None else Point2(0.0, domain.mid)
    if not contains(domain, a):
        raise PreconditionError(f"point {a.x1},{a.x2} is not in the domain {domain.name}")
    cfg = ReportConfig(K=args.K, N=args.N, depth=args.depth, max_cells=args.max_cells, workers=args.workers)
    rep = hyperbolicity_report(domain, a, cfg)
    doc = build_document(rep, cfg)
    # render everything before writing so no partial output is left behind on failure
    files = {}
    if "json" in args.format:
        files["certificate.json"] = serialize(doc)
    if "csv" in args.format:
        files["band.csv"] = band_csv(args.plot_n, mid=domain.mid)
        files["metric.csv"] = metric_csv(doc["obstruction"]["rows"])
    if "svg" in args.format:
        files["figure.svg"] = domain_svg(domain, args.plot_n)
    for name, text in files.items():
        print(f"wrote {_write(args.out, name, text)}")
    for key, val in summary(doc).items():
        print(f"{key}: {val}")
    exhausted = any(r.outcome.value == "Unknown" for p in (rep.L, rep.JPaff) for r in p.per_k) or any(
        c.outcome is ContainmentOutcome.UNKNOWN for c in rep.obstruction.certificates
    )
    if exhausted:
        print("search budget exhausted for some entries; raise --depth or --max-cells", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def cmd_plot(args: argparse.Namespace) -> int:
    if args.n < 1:
        raise UsageError(f"--n must be at least 1, got {args.n}")
    domain = _load_domain(args)
    files = {}
    if "svg" in args.format:
        files["figure.svg"] = domain_svg(domain, args.n)
    if "csv" in args.format:
        files["band.csv"] = band_csv(args.n, mid=domain.mid)
    for name, text in files.items():
        print(f"wrote {_write(args.out, name, text)}")
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    if not args.document.is_file():
        raise UsageError(f"document not found: {args.document}")
    doc = parse(args.document.read_text(encoding="utf-8"))
    res = verify_document(doc)
    for name, ok, msg in res.items:
        print(f"{'ok  ' if ok else 'FAIL'} {name}: {msg}")
    if not res.ok:
        name, msg = res.first_failure  # type: ignore[misc]
        print(f"verification failed at {name}: {msg}", file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK


def cmd_presets(args: argparse.Namespace) -> int:
    for name, text in sorted(PRESET_HELP.items()):
        print(f"{name:6s} {text}")
    return EXIT_OK


COMMANDS = {"analyze": cmd_analyze, "plot": cmd_plot, "verify": cmd_verify, "presets": cmd_presets}


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_USAGE
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (SpecError, GeometryError, PreconditionError, DocumentError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    raise SystemExit(main())
