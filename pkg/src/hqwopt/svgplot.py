"""Minimal deterministic SVG emission: scatter with reference diagonal,
histogram, and line-with-band plots.  No timestamps, so identical inputs
give byte-identical files."""

from __future__ import annotations

import math

WIDTH, HEIGHT = 640, 480
MARGIN = 60


def _fmt(x: float) -> str:
    return f"{x:.4g}"


class _Canvas:
    def __init__(self, title: str, xlabel: str, ylabel: str):
        self.parts = [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
            f'viewBox="0 0 {WIDTH} {HEIGHT}">',
            f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
            f'<text x="{WIDTH / 2}" y="24" text-anchor="middle" font-size="16">{title}</text>',
            f'<text x="{WIDTH / 2}" y="{HEIGHT - 8}" text-anchor="middle" font-size="13">{xlabel}</text>',
            f'<text x="16" y="{HEIGHT / 2}" text-anchor="middle" font-size="13" '
            f'transform="rotate(-90 16 {HEIGHT / 2})">{ylabel}</text>',
            f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
            f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>',
        ]

    def add(self, fragment: str):
        self.parts.append(fragment)

    def render(self) -> str:
        return "\n".join(self.parts + ["</svg>"]) + "\n"


class _Scale:
    def __init__(self, lo, hi, log=False):
        if log:
            lo = max(lo, 1e-12)
            hi = max(hi, lo * 10)
            self.lo, self.hi = math.log10(lo), math.log10(hi)
        else:
            if hi <= lo:
                hi = lo + 1.0
            self.lo, self.hi = lo, hi
        self.log = log

    def frac(self, x):
        v = math.log10(max(x, 1e-300)) if self.log else x
        return (v - self.lo) / (self.hi - self.lo)


def _px(frac):
    return MARGIN + frac * (WIDTH - 2 * MARGIN)


def _py(frac):
    return HEIGHT - MARGIN - frac * (HEIGHT - 2 * MARGIN)


def _ticks(canvas, xs: _Scale, ys: _Scale):
    for i in range(5):
        f = i / 4
        xv = xs.lo + f * (xs.hi - xs.lo)
        yv = ys.lo + f * (ys.hi - ys.lo)
        xlabel = _fmt(10 ** xv) if xs.log else _fmt(xv)
        ylabel = _fmt(10 ** yv) if ys.log else _fmt(yv)
        canvas.add(
            f'<text x="{_px(f):.1f}" y="{HEIGHT - MARGIN + 18}" text-anchor="middle" '
            f'font-size="11">{xlabel}</text>'
        )
        canvas.add(
            f'<text x="{MARGIN - 6}" y="{_py(f) + 4:.1f}" text-anchor="end" '
            f'font-size="11">{ylabel}</text>'
        )


def scatter_svg(xs, ys, title, xlabel, ylabel, log=False, diagonal=False, fit=None) -> str:
    """Scatter plot; optional y=x reference line and (slope, intercept) fit line."""
    c = _Canvas(title, xlabel, ylabel)
    lo = min(list(xs) + list(ys)) if xs else 0.0
    hi = max(list(xs) + list(ys)) if xs else 1.0
    pad = 0.0 if log else 0.05 * (hi - lo or 1.0)
    sx = _Scale(lo - pad, hi + pad, log)
    sy = _Scale(lo - pad, hi + pad, log)
    _ticks(c, sx, sy)
    if diagonal:
        c.add(
            f'<line x1="{_px(0):.1f}" y1="{_py(0):.1f}" x2="{_px(1):.1f}" y2="{_py(1):.1f}" '
            f'stroke="gray" stroke-dasharray="4 3"/>'
        )
    if fit is not None and not log:
        slope, intercept = fit
        x0, x1 = sx.lo, sx.hi
        for xa, xb in [(x0, x1)]:
            c.add(
                f'<line x1="{_px(sx.frac(xa)):.1f}" y1="{_py(sy.frac(slope * xa + intercept)):.1f}" '
                f'x2="{_px(sx.frac(xb)):.1f}" y2="{_py(sy.frac(slope * xb + intercept)):.1f}" '
                f'stroke="firebrick"/>'
            )
    for x, y in zip(xs, ys):
        c.add(
            f'<circle cx="{_px(sx.frac(x)):.1f}" cy="{_py(sy.frac(y)):.1f}" r="3.5" '
            f'fill="steelblue" fill-opacity="0.75"/>'
        )
    return c.render()


def histogram_svg(values, title, xlabel, bins=12) -> str:
    c = _Canvas(title, xlabel, "count")
    if not values:
        return c.render()
    lo, hi = min(values), max(values)
    if hi <= lo:
        hi = lo + 1.0
    width = (hi - lo) / bins
    counts = [0] * bins
    for v in values:
        idx = min(int((v - lo) / width), bins - 1)
        counts[idx] += 1
    sx = _Scale(lo, hi)
    sy = _Scale(0, max(counts))
    _ticks(c, sx, sy)
    for i, n in enumerate(counts):
        if n == 0:
            continue
        x0 = _px(sx.frac(lo + i * width))
        x1 = _px(sx.frac(lo + (i + 1) * width))
        y = _py(sy.frac(n))
        c.add(
            f'<rect x="{x0:.1f}" y="{y:.1f}" width="{x1 - x0:.1f}" '
            f'height="{_py(0) - y:.1f}" fill="steelblue" stroke="white"/>'
        )
    return c.render()


_SERIES_COLORS = ["steelblue", "firebrick", "seagreen", "darkorange", "purple"]


def lines_svg(xs, series, title, xlabel, ylabel, hline=None) -> str:
    """series: list of (label, ys, stds-or-None); optional horizontal
    reference line (e.g. a ground energy annotation)."""
    c = _Canvas(title, xlabel, ylabel)
    all_y = [v for _, ys, stds in series for v in ys]
    all_y += [
        y + s * sgn
        for _, ys, stds in series
        if stds is not None
        for y, s in zip(ys, stds)
        for sgn in (-1, 1)
    ]
    if hline is not None:
        all_y.append(hline)
    sx = _Scale(min(xs), max(xs))
    sy = _Scale(min(all_y), max(all_y))
    _ticks(c, sx, sy)
    if hline is not None:
        y = _py(sy.frac(hline))
        c.add(
            f'<line x1="{_px(0):.1f}" y1="{y:.1f}" x2="{_px(1):.1f}" y2="{y:.1f}" '
            f'stroke="black" stroke-dasharray="6 4"/>'
        )
    for idx, (label, ys, stds) in enumerate(series):
        color = _SERIES_COLORS[idx % len(_SERIES_COLORS)]
        if stds is not None:
            upper = [(x, y + s) for x, y, s in zip(xs, ys, stds)]
            lower = [(x, y - s) for x, y, s in zip(xs, ys, stds)]
            pts = upper + lower[::-1]
            path = " ".join(
                f"{_px(sx.frac(x)):.1f},{_py(sy.frac(y)):.1f}" for x, y in pts
            )
            c.add(f'<polygon points="{path}" fill="{color}" fill-opacity="0.15"/>')
        path = " ".join(
            f"{_px(sx.frac(x)):.1f},{_py(sy.frac(y)):.1f}" for x, y in zip(xs, ys)
        )
        c.add(f'<polyline points="{path}" fill="none" stroke="{color}" stroke-width="2"/>')
        c.add(
            f'<text x="{WIDTH - MARGIN - 6}" y="{MARGIN + 16 + 16 * idx}" text-anchor="end" '
            f'font-size="12" fill="{color}">{label}</text>'
        )
    return c.render()
