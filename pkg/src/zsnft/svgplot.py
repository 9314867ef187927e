"""Minimal standalone SVG log-log plots; no plotting dependency.

Good enough for the benchmark figures: decade ticks, one polyline with
markers per series, a legend box.  Points with non-positive coordinates
cannot be drawn on log axes and are dropped silently.
"""

from __future__ import annotations

import math

_PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b",
            "#17becf", "#e377c2")

_W, _H = 720, 520
_ML, _MR, _MT, _MB = 80, 180, 44, 56


def _decades(lo: float, hi: float):
    start = math.floor(math.log10(lo))
    stop = math.ceil(math.log10(hi))
    return [10.0 ** e for e in range(start, stop + 1)]


def loglog_plot(path, series, xlabel: str, ylabel: str, title: str) -> None:
    """Write a log-log SVG; ``series`` is a list of (label, xs, ys)."""
    pts = []
    for _, xs, ys in series:
        pts.extend((x, y) for x, y in zip(xs, ys) if x > 0 and y > 0 and
                   math.isfinite(x) and math.isfinite(y))
    if not pts:
        raise ValueError("nothing to plot: no positive finite points")
    xlo = min(p[0] for p in pts)
    xhi = max(p[0] for p in pts)
    ylo = min(p[1] for p in pts)
    yhi = max(p[1] for p in pts)
    # pad one tenth of a decade on each side
    xlo, xhi = xlo * 10 ** -0.1, xhi * 10 ** 0.1
    ylo, yhi = ylo * 10 ** -0.1, yhi * 10 ** 0.1

    def sx(x: float) -> float:
        return _ML + (math.log10(x) - math.log10(xlo)) / (
            math.log10(xhi) - math.log10(xlo)) * (_W - _ML - _MR)

    def sy(y: float) -> float:
        return _H - _MB - (math.log10(y) - math.log10(ylo)) / (
            math.log10(yhi) - math.log10(ylo)) * (_H - _MT - _MB)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}" font-family="sans-serif" font-size="12">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
        f'<text x="{(_ML + _W - _MR) / 2}" y="{_MT - 16}" text-anchor="middle" '
        f'font-size="14">{title}</text>',
    ]
    # frame
    out.append(
        f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
        f'height="{_H - _MT - _MB}" fill="none" stroke="#333"/>'
    )
    for tick in _decades(xlo, xhi):
        if tick < xlo or tick > xhi:
            continue
        px = sx(tick)
        out.append(f'<line x1="{px:.1f}" y1="{_MT}" x2="{px:.1f}" '
                   f'y2="{_H - _MB}" stroke="#ddd"/>')
        exp = round(math.log10(tick))
        out.append(f'<text x="{px:.1f}" y="{_H - _MB + 18}" text-anchor="middle">'
                   f'1e{exp}</text>')
    for tick in _decades(ylo, yhi):
        if tick < ylo or tick > yhi:
            continue
        py = sy(tick)
        out.append(f'<line x1="{_ML}" y1="{py:.1f}" x2="{_W - _MR}" '
                   f'y2="{py:.1f}" stroke="#ddd"/>')
        exp = round(math.log10(tick))
        out.append(f'<text x="{_ML - 8}" y="{py + 4:.1f}" text-anchor="end">'
                   f'1e{exp}</text>')
    out.append(f'<text x="{(_ML + _W - _MR) / 2}" y="{_H - 12}" '
               f'text-anchor="middle">{xlabel}</text>')
    out.append(f'<text x="20" y="{(_MT + _H - _MB) / 2}" text-anchor="middle" '
               f'transform="rotate(-90 20 {(_MT + _H - _MB) / 2})">{ylabel}</text>')

    for idx, (label, xs, ys) in enumerate(series):
        color = _PALETTE[idx % len(_PALETTE)]
        coords = [(sx(x), sy(y)) for x, y in zip(xs, ys)
                  if x > 0 and y > 0 and math.isfinite(x) and math.isfinite(y)]
        if not coords:
            continue
        path_d = " ".join(f"{px:.2f},{py:.2f}" for px, py in coords)
        out.append(f'<polyline points="{path_d}" fill="none" stroke="{color}" '
                   f'stroke-width="1.6"/>')
        for px, py in coords:
            out.append(f'<circle cx="{px:.2f}" cy="{py:.2f}" r="3" fill="{color}"/>')
        ly = _MT + 18 + 18 * idx
        lx = _W - _MR + 14
        out.append(f'<line x1="{lx}" y1="{ly - 4}" x2="{lx + 24}" y2="{ly - 4}" '
                   f'stroke="{color}" stroke-width="1.6"/>')
        out.append(f'<text x="{lx + 30}" y="{ly}">{label}</text>')
    out.append("</svg>")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(out) + "\n")
