"""SVG figures of a domain with the image band of ``f_n``, and CSV tables."""

from __future__ import annotations

import csv
import io
import math
from typing import Any, Iterable, Sequence

import numpy as np

from .geometry import DomainSpec, SmoothTooth, VerticalSlit, bump_value
from .witness_maps import band_samples, cosh_ratio

_W, _H, _PAD = 960.0, 360.0, 30.0


def _fmt(v: float) -> str:
    return f"{v:.2f}"


class _Frame:
    def __init__(self, x_lo: float, x_hi: float, y_lo: float, y_hi: float):
        self.x_lo, self.x_hi, self.y_lo, self.y_hi = x_lo, x_hi, y_lo, y_hi

    def px(self, x: float) -> float:
        return _PAD + (x - self.x_lo) / (self.x_hi - self.x_lo) * (_W - 2 * _PAD)

    def py(self, y: float) -> float:
        return _H - _PAD - (y - self.y_lo) / (self.y_hi - self.y_lo) * (_H - 2 * _PAD)

    def points(self, xs: Iterable[float], ys: Iterable[float]) -> str:
        return " ".join(f"{_fmt(self.px(x))},{_fmt(self.py(y))}" for x, y in zip(xs, ys))


def _tooth_outline(domain: DomainSpec, tooth: SmoothTooth, count: int = 121) -> tuple[list[float], list[float]]:
    a, w = tooth.apex.value, tooth.half_width
    xs = [float(x) for x in np.linspace(a - w, a + w, count)]
    if tooth.anchor == "lo":
        ys = [domain.y_lo + (domain.mid - domain.y_lo) * bump_value((x - a) / w) for x in xs]
        base = domain.y_lo
    else:
        ys = [domain.y_hi - (domain.y_hi - domain.mid) * bump_value((x - a) / w) for x in xs]
        base = domain.y_hi
    return [xs[0], *xs, xs[-1]], [base, *ys, base]


def domain_svg(domain: DomainSpec, n: int, x_half: float | None = None, samples: int = 801) -> str:
    """Strip, obstacles, the graphs ``sin x1 + mid`` and ``sin(x1)/cosh(n) + mid``, and the band between them."""
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    n = int(n)
    if not domain.is_bounded_strip:
        raise ValueError("plotting needs a bounded strip")
    half = float(x_half) if x_half is not None else max(float(n), 2.0 * math.pi) + 0.5
    margin = 0.1 * (domain.y_hi - domain.y_lo)
    fr = _Frame(-half, half, domain.y_lo - margin, domain.y_hi + margin)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{int(_W)}" height="{int(_H)}" viewBox="0 0 {int(_W)} {int(_H)}">',
        f"<title>{domain.name}: image band of f_{n}</title>",
        '<rect width="100%" height="100%" fill="white"/>',
    ]
    top, bot = fr.py(domain.y_hi), fr.py(domain.y_lo)
    out.append(
        f'<rect class="strip" x="{_fmt(fr.px(-half))}" y="{_fmt(top)}" width="{_fmt(fr.px(half) - fr.px(-half))}" '
        f'height="{_fmt(bot - top)}" fill="#f4f7fb" stroke="black" stroke-width="1"/>'
    )

    rows = band_samples(n, samples, domain.mid)
    xs = [r[0] for r in rows if abs(r[0]) <= half]
    upper = [math.sin(x) + domain.mid for x in xs]
    s = cosh_ratio(n, 0.0)
    lower = [math.sin(x) * s + domain.mid for x in xs]
    poly = fr.points(xs + xs[::-1], upper + lower[::-1])
    out.append(f'<polygon class="band" points="{poly}" fill="#9ecae1" fill-opacity="0.6" stroke="none"/>')
    out.append(f'<polyline class="graph-sin" points="{fr.points(xs, upper)}" fill="none" stroke="#08519c" stroke-width="1.5"/>')
    out.append(f'<polyline class="graph-sech" points="{fr.points(xs, lower)}" fill="none" stroke="#3182bd" stroke-width="1.5" stroke-dasharray="5,3"/>')

    for ob in domain.obstacles:
        if isinstance(ob, VerticalSlit):
            x = fr.px(ob.abscissa.value)
            out.append(
                f'<line class="slit" x1="{_fmt(x)}" y1="{_fmt(fr.py(ob.span.lo))}" x2="{_fmt(x)}" '
                f'y2="{_fmt(fr.py(ob.span.hi))}" stroke="#a50f15" stroke-width="3"/>'
            )
        else:
            txs, tys = _tooth_outline(domain, ob)
            out.append(f'<polygon class="tooth" points="{fr.points(txs, tys)}" fill="#fcbba1" stroke="#a50f15" stroke-width="1.5"/>')

    mid_y = fr.py(domain.mid)
    out.append(f'<line class="midline" x1="{_fmt(fr.px(-half))}" y1="{_fmt(mid_y)}" x2="{_fmt(fr.px(half))}" y2="{_fmt(mid_y)}" stroke="gray" stroke-dasharray="2,4"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _csv(header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([repr(v) if isinstance(v, float) else v for v in r])
    return buf.getvalue()


def band_csv(n: int, samples: int = 401, mid: float = 2.0) -> str:
    return _csv(("x1", "band_lo", "band_hi"), band_samples(n, samples, mid))


def metric_csv(rows: Sequence[dict[str, Any]]) -> str:
    """Rows ``(n, op_norm, upper_bound)`` of an obstruction scan."""
    return _csv(("n", "op_norm", "upper_bound"), ((r["n"], r["op_norm_df"], r["kobayashi_upper"]) for r in rows))
