"""Reading domain specs from TOML files.

Either a preset::

    preset = "fig1"            # or "fig2", "strip"

or an explicit strip with obstacles::

    name = "one-slit"

    [strip]
    y_lo = 0.0
    y_hi = 4.0
    mid = 2.0

    [[obstacles]]
    kind = "slit"
    x = "1/2*pi"               # a number, or a rational multiple of pi
    span = [0.0, 2.6]

    [[obstacles]]
    kind = "tooth"
    anchor = "lo"              # "lo" rises from y_lo, "hi" hangs from y_hi
    apex = "-3/2*pi"
    half_width = 1.2

``preset = "fig2"`` may carry a ``[[teeth]]`` array (``apex``, ``half_width``)
replacing the four default teeth.
"""

from __future__ import annotations

import math
import re
import sys
from pathlib import Path
from typing import Any, Callable

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib

from .geometry import (
    FIG2_DEFAULT,
    DomainSpec,
    GeometryError,
    ToothParams,
    bare_strip,
    build_figure1,
    build_figure2,
    domain_from_dict,
    validate,
)

PRESETS: dict[str, Callable[[], DomainSpec]] = {
    "fig1": build_figure1,
    "fig2": build_figure2,
    "strip": bare_strip,
}

PRESET_HELP = {
    "fig1": "strip 0 < x2 < 4 minus slits at -3pi/2, -pi/2, pi/2, 3pi/2 (rough boundary)",
    "fig2": "strip 0 < x2 < 4 minus four smooth teeth reaching the mid-line",
    "strip": "the bare strip 0 < x2 < 4",
}


class SpecError(ValueError):
    """Schema error in a spec file, naming the offending field and (when known) its line."""

    def __init__(self, message: str, field: str | None = None, line: int | None = None):
        self.field = field
        self.line = line
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{', '.join(where)}: {message}" if where else message)


def _locate(text: str, field: str) -> int | None:
    """Best-effort line number of a dotted field path such as ``obstacles[1].kind``."""
    lines = text.splitlines()
    parts = re.findall(r"([A-Za-z_]+)(?:\[(\d+)\])?", field)
    start = 0
    for name, idx in parts:
        if idx:
            hits = [i for i, ln in enumerate(lines) if re.match(rf"\s*\[\[\s*{name}\s*\]\]", ln)]
            if int(idx) < len(hits):
                start = hits[int(idx)]
                continue
            return None
        for i in range(start, len(lines)):
            if re.match(rf"\s*(\[{{1,2}}\s*)?{name}\s*(=|\])", lines[i]):
                start = i
                break
        else:
            return None
    return start + 1


def _number(data: dict[str, Any], key: str, path: str, text: str) -> float:
    if key not in data:
        raise SpecError("missing required field", path, _locate(text, path))
    v = data[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise SpecError(f"expected a number, got {v!r}", path, _locate(text, path))
    return float(v)


_OBSTACLE_KEYS = {"slit": {"kind", "x", "span"}, "tooth": {"kind", "anchor", "apex", "half_width"}}


def _check_obstacle(ob: Any, i: int, text: str) -> None:
    base = f"obstacles[{i}]"
    if not isinstance(ob, dict):
        raise SpecError("expected a table", base, _locate(text, base))
    kind = ob.get("kind")
    if kind not in _OBSTACLE_KEYS:
        raise SpecError(f"kind must be 'slit' or 'tooth', got {kind!r}", f"{base}.kind", _locate(text, f"{base}.kind"))
    for key in sorted(_OBSTACLE_KEYS[kind] - set(ob)):
        raise SpecError("missing required field", f"{base}.{key}", _locate(text, base))
    for key in sorted(set(ob) - _OBSTACLE_KEYS[kind]):
        raise SpecError(f"unknown field for a {kind}", f"{base}.{key}", _locate(text, f"{base}.{key}"))
    if kind == "slit":
        span = ob["span"]
        if not (isinstance(span, list) and len(span) == 2 and all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in span)):
            raise SpecError("span must be a pair of numbers", f"{base}.span", _locate(text, f"{base}.span"))
        if not isinstance(ob["x"], (int, float, str)) or isinstance(ob["x"], bool):
            raise SpecError("x must be a number or a multiple of pi", f"{base}.x", _locate(text, f"{base}.x"))
    else:
        if ob["anchor"] not in ("lo", "hi"):
            raise SpecError("anchor must be 'lo' or 'hi'", f"{base}.anchor", _locate(text, f"{base}.anchor"))
        _number(ob, "half_width", f"{base}.half_width", text)


def domain_from_toml(text: str, source: str = "<string>") -> DomainSpec:
    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as exc:
        m = re.search(r"line (\d+)", str(exc))
        raise SpecError(f"{source}: {exc}", None, int(m.group(1)) if m else None) from None

    if "preset" in data:
        preset = data["preset"]
        if preset not in PRESETS:
            raise SpecError(f"unknown preset {preset!r} (known: {', '.join(PRESETS)})", "preset", _locate(text, "preset"))
        extra = set(data) - {"preset", "teeth", "name"}
        if extra:
            f = sorted(extra)[0]
            raise SpecError("not allowed together with a preset", f, _locate(text, f))
        if "teeth" in data:
            if preset != "fig2":
                raise SpecError("teeth may only be given with preset 'fig2'", "teeth", _locate(text, "teeth"))
            teeth = []
            for i, t in enumerate(data["teeth"]):
                path = f"teeth[{i}]"
                if not isinstance(t, dict) or "apex" not in t:
                    raise SpecError("each tooth needs an apex", path, _locate(text, path))
                hw = _number(t, "half_width", f"{path}.half_width", text) if "half_width" in t else FIG2_DEFAULT[i % 4].half_width
                teeth.append(ToothParams(t["apex"], hw))
            return build_figure2(teeth, name=str(data.get("name", "fig2")))
        return PRESETS[preset]()

    if "strip" not in data or not isinstance(data["strip"], dict):
        raise SpecError("missing [strip] table (or a preset)", "strip", None)
    strip = data["strip"]
    for key in ("y_lo", "y_hi", "mid"):
        v = _number(strip, key, f"strip.{key}", text)
        if math.isnan(v):
            raise SpecError("NaN is not allowed", f"strip.{key}", _locate(text, f"strip.{key}"))
    for key in sorted(set(strip) - {"y_lo", "y_hi", "mid"}):
        raise SpecError("unknown field", f"strip.{key}", _locate(text, f"strip.{key}"))
    obstacles = data.get("obstacles", [])
    if not isinstance(obstacles, list):
        raise SpecError("expected an array of tables", "obstacles", _locate(text, "obstacles"))
    for i, ob in enumerate(obstacles):
        _check_obstacle(ob, i, text)
    for key in sorted(set(data) - {"name", "strip", "obstacles"}):
        raise SpecError("unknown top-level field", key, _locate(text, key))
    payload = {"name": str(data.get("name", Path(source).stem or "custom")), "strip": strip, "obstacles": obstacles}
    try:
        domain = domain_from_dict(payload)
    except GeometryError as exc:
        raise GeometryError(f"{source}: {exc}") from None
    return validate(domain)


def parse_spec(path: str | Path) -> DomainSpec:
    """Load and validate a spec file; SpecError for schema problems, GeometryError for invalid domains."""
    p = Path(path)
    return domain_from_toml(p.read_text(encoding="utf-8"), str(p))


def preset(name: str) -> DomainSpec:
    if name not in PRESETS:
        raise SpecError(f"unknown preset {name!r} (known: {', '.join(PRESETS)})", "preset")
    return PRESETS[name]()
