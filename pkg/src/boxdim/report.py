"""Square vs triangle mesh comparison: counts, fits, text report and SVG plot.

All outputs are deterministic for a fixed configuration (fixed row order,
fixed number formatting, no timestamps).
"""
from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from typing import Dict, List, Sequence
from xml.sax.saxutils import escape

from .dyadic import Dyadic, format_scalar
from .estimation import FitResult, fit_loglog, fits_to_csv
from .generators import finest_scale
from .geometry import GeoSet, Point
from .mesh import MESHES, CountRecord, MeshSpec, count_mesh, counts_to_csv, format_delta

__all__ = ["CompareResult", "compare_meshes", "run_compare", "render_report", "render_svg"]


@dataclass
class CompareResult:
    geoset: GeoSet
    deltas: list
    records: List[CountRecord]
    fits: Dict[str, FitResult]
    checks: List[tuple]            # (delta, N, T, ok)
    warnings: List[str] = field(default_factory=list)
    schedule_label: str = ""
    cell_mode: str = "closed"
    diagonal: str = "ne"
    offset: Point = Point(Dyadic(0), Dyadic(0))

    @property
    def ok(self):
        return all(c[3] for c in self.checks)


def compare_meshes(g: GeoSet, deltas: Sequence, *, cell_mode="closed", diagonal="ne",
                   offset=Point(Dyadic(0), Dyadic(0)), mode=None, n_jobs=None,
                   schedule_label="") -> CompareResult:
    """Count both meshes at every delta, fit both series, check N <= T <= 2N."""
    warnings = []
    scale = finest_scale(g)
    if scale is not None and float(deltas[-1]) < scale:
        warnings.append(
            f"delta {format_delta(deltas[-1])} is below the feature size {scale:.6g} of "
            f"{g.name} stage {g.stage}; counts at that scale see the prefractal, not the limit set")
    if g.mode == "exact" and mode != "approx":
        inexact = [d for d in deltas if not isinstance(d, Dyadic)]
        if inexact:
            warnings.append(f"{len(inexact)} non-dyadic delta value(s) counted in approx mode")

    records = {mesh: [] for mesh in MESHES}
    checks = []
    for d in deltas:
        spec = MeshSpec(d, offset, cell_mode, diagonal)
        n_rec = count_mesh(g, spec, "square", mode=mode, n_jobs=n_jobs)
        t_rec = count_mesh(g, spec, "triangle", mode=mode, n_jobs=n_jobs)
        records["square"].append(n_rec)
        records["triangle"].append(t_rec)
        checks.append((d, n_rec.count, t_rec.count,
                       n_rec.count <= t_rec.count <= 2 * n_rec.count))
    fits = {mesh: fit_loglog(records[mesh]) for mesh in MESHES}
    flat = records["square"] + records["triangle"]
    return CompareResult(g, list(deltas), flat, fits, checks, warnings, schedule_label,
                         cell_mode, diagonal, offset)


def render_report(res: CompareResult) -> str:
    g = res.geoset
    stage = "-" if g.stage is None else str(g.stage)
    lines = [
        f"set: {g.name} (stage {stage}, {len(g)} primitives, {g.mode} coordinates)",
        f"schedule: {res.schedule_label or ', '.join(format_delta(d) for d in res.deltas)}",
        f"cells: {res.cell_mode}, diagonal {res.diagonal}, "
        f"offset ({format_scalar(res.offset[0])},{format_scalar(res.offset[1])})",
        "",
        "mesh inequality N <= T <= 2N per delta",
        f"{'delta':<24}{'N_delta':>12}{'T_delta':>12}  check",
    ]
    for d, n, t, ok in res.checks:
        lines.append(f"{format_delta(d):<24}{n:>12}{t:>12}  {'PASS' if ok else 'FAIL'}")
    lines += [
        "",
        "least-squares fit of log10(count) against -log10(delta)",
        f"{'mesh':<10}{'slope':>12}{'intercept':>12}{'r_squared':>12}{'n_points':>10}",
    ]
    for mesh in MESHES:
        f = res.fits[mesh]
        lines.append(f"{mesh:<10}{f.slope:>12.6f}{f.intercept:>12.6f}"
                     f"{f.r_squared:>12.6f}{f.n_points:>10}")
    diff = res.fits["triangle"].slope - res.fits["square"].slope
    lines.append(f"slope difference (triangle - square): {diff:+.6f}")
    lines.append("")
    if res.warnings:
        lines.append("warnings:")
        lines.extend(f"  {w}" for w in res.warnings)
        lines.append("")
    lines.append(f"result: {'PASS' if res.ok else 'FAIL'}")
    return "\n".join(lines) + "\n"


_W, _H = 640, 480
_LEFT, _RIGHT, _TOP, _BOTTOM = 70, 20, 30, 60
_STYLE = {"square": ("#1f77b4", "square mesh"), "triangle": ("#d62728", "triangle mesh")}


def _ticks(lo, hi, n=5):
    raw = (hi - lo) / n
    mag = 10 ** math.floor(math.log10(raw))
    step = min((s * mag for s in (1, 2, 2.5, 5, 10) if s * mag >= raw), default=raw)
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    v = first
    while v <= hi + 1e-9 * step:
        out.append(round(v, 10))
        v += step
    return out


def render_svg(res: CompareResult) -> str:
    pts = {mesh: [(-math.log10(float(r.delta)), math.log10(r.count))
                  for r in res.records if r.mesh == mesh] for mesh in MESHES}
    xs = [p[0] for s in pts.values() for p in s]
    ys = [p[1] for s in pts.values() for p in s]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    padx = (x1 - x0) * 0.05 or 0.5
    pady = (y1 - y0) * 0.05 or 0.5
    x0, x1, y0, y1 = x0 - padx, x1 + padx, y0 - pady, y1 + pady
    pw, ph = _W - _LEFT - _RIGHT, _H - _TOP - _BOTTOM

    def sx(x):
        return _LEFT + (x - x0) / (x1 - x0) * pw

    def sy(y):
        return _TOP + ph - (y - y0) / (y1 - y0) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{_W / 2:.2f}" y="18" text-anchor="middle" font-size="14">'
        f'{escape(res.geoset.name)}: curve fitting comparison</text>',
        f'<rect x="{_LEFT}" y="{_TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for t in _ticks(x0, x1):
        out.append(f'<line x1="{sx(t):.2f}" y1="{_TOP + ph}" x2="{sx(t):.2f}" '
                   f'y2="{_TOP + ph + 5}" stroke="black"/>')
        out.append(f'<text x="{sx(t):.2f}" y="{_TOP + ph + 18}" text-anchor="middle">{t:g}</text>')
    for t in _ticks(y0, y1):
        out.append(f'<line x1="{_LEFT - 5}" y1="{sy(t):.2f}" x2="{_LEFT}" y2="{sy(t):.2f}" '
                   f'stroke="black"/>')
        out.append(f'<text x="{_LEFT - 8}" y="{sy(t) + 4:.2f}" text-anchor="end">{t:g}</text>')
    out.append(f'<text x="{_LEFT + pw / 2:.2f}" y="{_H - 15}" text-anchor="middle">'
               f'−log₁₀ δ</text>')
    out.append(f'<text x="18" y="{_TOP + ph / 2:.2f}" text-anchor="middle" '
               f'transform="rotate(-90 18 {_TOP + ph / 2:.2f})">log₁₀ count</text>')

    for i, mesh in enumerate(MESHES):
        color, label = _STYLE[mesh]
        f = res.fits[mesh]
        lx0, lx1 = min(p[0] for p in pts[mesh]), max(p[0] for p in pts[mesh])
        out.append(f'<line x1="{sx(lx0):.2f}" y1="{sy(f.intercept + f.slope * lx0):.2f}" '
                   f'x2="{sx(lx1):.2f}" y2="{sy(f.intercept + f.slope * lx1):.2f}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        for x, y in pts[mesh]:
            cx, cy = sx(x), sy(y)
            if mesh == "square":
                out.append(f'<rect x="{cx - 4:.2f}" y="{cy - 4:.2f}" width="8" height="8" '
                           f'fill="{color}"/>')
            else:
                out.append(f'<polygon points="{cx:.2f},{cy - 5:.2f} {cx + 5:.2f},{cy + 4:.2f} '
                           f'{cx - 5:.2f},{cy + 4:.2f}" fill="{color}"/>')
        ly = _TOP + 18 + 18 * i
        out.append(f'<line x1="{_LEFT + 12}" y1="{ly}" x2="{_LEFT + 36}" y2="{ly}" '
                   f'stroke="{color}" stroke-width="1.5"/>')
        out.append(f'<text x="{_LEFT + 42}" y="{ly + 4}">{label}: slope {f.slope:.4f}, '
                   f'R² {f.r_squared:.4f}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def run_compare(g: GeoSet, deltas: Sequence, out_dir, **kwargs) -> CompareResult:
    """Run :func:`compare_meshes` and write counts.csv, fit.csv, report.txt
    and plot.svg into ``out_dir``."""
    res = compare_meshes(g, deltas, **kwargs)
    os.makedirs(out_dir, exist_ok=True)
    files = {
        "counts.csv": counts_to_csv(res.records),
        "fit.csv": fits_to_csv([res.fits[m] for m in MESHES]),
        "report.txt": render_report(res),
        "plot.svg": render_svg(res),
    }
    for name, text in files.items():
        with open(os.path.join(out_dir, name), "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    return res
