"""Sampled density curves as CSV and as a small self-contained SVG chart."""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Optional, Sequence

import numpy as np

from . import f53_family, ft_family, roots, triangle
from .errors import DomainError

Point = tuple[float, float]

COLORS = {
    "florian": "#d62728",
    "ft": "#1f5fbf",
    "delta53": "#2ca02c",
    "ratio": "#8a3ab9",
    "intermediate": "#e07b00",
}


def _delta53(q: float) -> float:
    # Packing 53 itself below q53, its perturbation above.
    if q <= roots.q53():
        return f53_family.f53_density_closed(roots.q53())
    return f53_family.f53_density_closed(q)


@lru_cache(maxsize=None)
def _q0() -> float:
    return roots.critical_ratios()["q0"].value


def _domains() -> dict[str, tuple[float, float, bool]]:
    """name -> (lo, hi, lo_open); hi is closed except for the ratio curve."""
    q0 = _q0()
    return {
        "florian": (0.0, 1.0, True),
        "ft": (roots.q1(), 1.0, False),
        "delta53": (q0, 1.0, False),
        "ratio": (0.0, 1.0, True),
        "intermediate": (0.0, 1.0, True),
    }


@dataclass(frozen=True)
class CurveSpec:
    """A named curve sampled uniformly on ``domain``.

    For ``intermediate`` the fixed smallest radius is the left end of the
    domain, so the curve runs from the (r0, r0, 1) to the (r0, 1, 1) triangle.
    """

    name: str
    domain: tuple[float, float]
    samples: int = 200

    def __post_init__(self):
        doms = _domains()
        if self.name not in doms:
            raise DomainError(f"unknown curve {self.name!r}; choose from {sorted(doms)}")
        lo, hi = self.domain
        if not lo < hi:
            raise DomainError("curve domain needs lo < hi")
        if self.samples < 2:
            raise DomainError("need at least two samples")
        dlo, dhi, lo_open = doms[self.name]
        bad_lo = lo <= dlo if lo_open else lo < dlo
        bad_hi = hi >= dhi if self.name == "ratio" else hi > dhi
        if bad_lo or bad_hi:
            raise DomainError(f"curve {self.name!r} is defined on [{dlo!r}, {dhi!r}], got {self.domain!r}")


def _function(spec: CurveSpec) -> Callable[[float], float]:
    if spec.name == "florian":
        return triangle.florian_bound
    if spec.name == "ft":
        return ft_family.ft_density_closed
    if spec.name == "delta53":
        return _delta53
    if spec.name == "ratio":
        return triangle.ratio_lls_over_lss
    r0 = spec.domain[0]
    return lambda r: triangle.intermediate_density_curve(r0, r)


def sample_curve(spec: CurveSpec) -> list[Point]:
    f = _function(spec)
    qs = np.linspace(spec.domain[0], spec.domain[1], spec.samples)
    qs[-1] = spec.domain[1]
    return [(float(q), float(f(float(q)))) for q in qs]


def clipped_spec(name: str, lo: float, hi: float, samples: int) -> Optional[CurveSpec]:
    """Spec for the part of ``[lo, hi]`` inside the curve's domain, or None if empty."""
    doms = _domains()
    if name not in doms:
        raise DomainError(f"unknown curve {name!r}; choose from {sorted(doms)}")
    dlo, dhi, _ = doms[name]
    lo2 = max(lo, dlo)
    hi2 = min(hi, dhi)
    if lo2 <= dlo and doms[name][2]:
        lo2 = dlo + (hi2 - dlo) * 1e-6
    if name == "ratio" and hi2 >= dhi:
        hi2 = dhi - 1e-9
    if not lo2 < hi2:
        return None
    return CurveSpec(name, (lo2, hi2), samples)


def emit_csv(points: Sequence[Point]) -> str:
    if not points:
        raise DomainError("no points to write")
    lines = ["q,value"] + [f"{q:.12g},{v:.12g}" for q, v in points]
    return "\n".join(lines) + "\n"


def _nice_step(span: float, target: int = 6) -> float:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw))
    for m in (1, 2, 2.5, 5, 10):
        if m * mag >= raw:
            return m * mag
    return 10 * mag


def emit_plot_svg(
    curves: Mapping[str, Sequence[Point]],
    markers: Optional[Mapping[str, float]] = None,
    width: int = 720,
    height: int = 440,
) -> str:
    """Line chart with one polyline per curve and dashed vertical markers."""
    if not curves or not any(curves.values()):
        raise DomainError("no curves to plot")
    markers = dict(markers or {})
    pts = [pt for c in curves.values() for pt in c]
    xs = [q for q, _ in pts] + [m for m in markers.values()]
    ys = [v for _, v in pts]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 == x0:
        x1 = x0 + 1
    pad = 0.05 * (y1 - y0 or 1.0)
    y0, y1 = y0 - pad, y1 + pad
    ml, mr, mt, mb = 70, 130, 20, 45
    pw, ph = width - ml - mr, height - mt - mb

    def X(q):
        return ml + (q - x0) / (x1 - x0) * pw

    def Y(v):
        return mt + (y1 - v) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="11">',
        f'<rect class="frame" x="{ml}" y="{mt}" width="{pw}" height="{ph}" fill="none" stroke="#000"/>',
    ]
    step = _nice_step(x1 - x0)
    t = math.ceil(x0 / step) * step
    while t <= x1 + 1e-12:
        out.append(f'<line x1="{X(t):.3f}" y1="{mt + ph}" x2="{X(t):.3f}" y2="{mt + ph + 4}" stroke="#000"/>')
        out.append(f'<text x="{X(t):.3f}" y="{mt + ph + 16}" text-anchor="middle">{t:.4g}</text>')
        t += step
    step = _nice_step(y1 - y0)
    t = math.ceil(y0 / step) * step
    while t <= y1 + 1e-12:
        out.append(f'<line x1="{ml - 4}" y1="{Y(t):.3f}" x2="{ml}" y2="{Y(t):.3f}" stroke="#000"/>')
        out.append(f'<text x="{ml - 6}" y="{Y(t) + 4:.3f}" text-anchor="end">{t:.4g}</text>')
        t += step
    out.append(f'<text x="{ml + pw / 2:.3f}" y="{height - 8}" text-anchor="middle">q</text>')
    for name, q in sorted(markers.items(), key=lambda kv: kv[1]):
        if x0 <= q <= x1:
            out.append(f'<line class="marker" data-name="{name}" x1="{X(q):.3f}" y1="{mt}" '
                       f'x2="{X(q):.3f}" y2="{mt + ph}" stroke="#555" stroke-dasharray="4,3"/>')
            out.append(f'<text x="{X(q) + 2:.3f}" y="{mt + 10}" fill="#555">{name}</text>')
    for k, (name, pts_) in enumerate(curves.items()):
        color = COLORS.get(name, "#000000")
        path = " ".join(f"{X(q):.3f},{Y(v):.3f}" for q, v in pts_)
        out.append(f'<polyline class="curve" data-name="{name}" points="{path}" fill="none" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        ly = mt + 14 + 16 * k
        out.append(f'<line x1="{ml + pw + 10}" y1="{ly}" x2="{ml + pw + 30}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{ml + pw + 34}" y="{ly + 4}">{name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
