"""Minimal static SVG line plots (log or linear axes)."""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

import numpy as np

__all__ = ["line_plot"]

_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
_MARGIN = {"left": 78, "right": 170, "top": 40, "bottom": 56}


def _num(x):
    return f"{x:.2f}"


def _axis(values, log):
    values = np.asarray(values, dtype=float)
    values = values[np.isfinite(values) & ((values > 0) if log else True)]
    if values.size == 0:
        return (0.0, 1.0) if not log else (0.0, 1.0)
    if log:
        lo, hi = math.floor(np.log10(values.min())), math.ceil(np.log10(values.max()))
        return (float(lo), float(hi if hi > lo else lo + 1))
    lo, hi = float(values.min()), float(values.max())
    if hi == lo:
        lo, hi = lo - 0.5, hi + 0.5
    return lo, hi


def _ticks(lo, hi, log):
    if log:
        step = max(1, int(math.ceil((hi - lo) / 10)))
        return [(e, f"1e{int(e)}") for e in np.arange(lo, hi + 0.5, step)]
    ticks = np.linspace(lo, hi, 6)
    return [(t, f"{t:.3g}") for t in ticks]


def line_plot(series, title="", xlabel="", ylabel="", logx=True, logy=True, width=760, height=460):
    """Render ``series`` (list of ``(label, x, y)``) as an SVG document string.

    Points that cannot be shown on a log axis (zero, negative, non-finite)
    break the polyline instead of being clipped.
    """
    all_x = np.concatenate([np.asarray(x, dtype=float) for _, x, _ in series]) if series else np.array([1.0])
    all_y = np.concatenate([np.asarray(y, dtype=float) for _, _, y in series]) if series else np.array([1.0])
    xlo, xhi = _axis(all_x, logx)
    ylo, yhi = _axis(all_y, logy)
    pw = width - _MARGIN["left"] - _MARGIN["right"]
    ph = height - _MARGIN["top"] - _MARGIN["bottom"]

    def tx(v):
        v = math.log10(v) if logx else v
        return _MARGIN["left"] + (v - xlo) / (xhi - xlo) * pw

    def ty(v):
        v = math.log10(v) if logy else v
        return _MARGIN["top"] + ph - (v - ylo) / (yhi - ylo) * ph

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">',
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white"/>',
        f'<text x="{width / 2:.1f}" y="22" text-anchor="middle" font-size="15">{escape(title)}</text>',
        f'<rect x="{_MARGIN["left"]}" y="{_MARGIN["top"]}" width="{pw}" height="{ph}" fill="none" stroke="black"/>',
    ]
    for val, label in _ticks(xlo, xhi, logx):
        x = _MARGIN["left"] + (val - xlo) / (xhi - xlo) * pw
        out.append(f'<line x1="{_num(x)}" y1="{_MARGIN["top"]}" x2="{_num(x)}" y2="{_MARGIN["top"] + ph}" stroke="#ddd"/>')
        out.append(f'<text x="{_num(x)}" y="{_MARGIN["top"] + ph + 16}" text-anchor="middle">{label}</text>')
    for val, label in _ticks(ylo, yhi, logy):
        y = _MARGIN["top"] + ph - (val - ylo) / (yhi - ylo) * ph
        out.append(f'<line x1="{_MARGIN["left"]}" y1="{_num(y)}" x2="{_MARGIN["left"] + pw}" y2="{_num(y)}" stroke="#ddd"/>')
        out.append(f'<text x="{_MARGIN["left"] - 6}" y="{_num(y + 4)}" text-anchor="end">{label}</text>')
    out.append(
        f'<text x="{_MARGIN["left"] + pw / 2:.1f}" y="{height - 14}" text-anchor="middle">{escape(xlabel)}</text>'
    )
    out.append(
        f'<text x="18" y="{_MARGIN["top"] + ph / 2:.1f}" text-anchor="middle" '
        f'transform="rotate(-90 18 {_MARGIN["top"] + ph / 2:.1f})">{escape(ylabel)}</text>'
    )
    for k, (label, xs, ys) in enumerate(series):
        color = _COLORS[k % len(_COLORS)]
        segment = []
        segments = []
        for xv, yv in zip(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float)):
            visible = np.isfinite(xv) and np.isfinite(yv) and (xv > 0 or not logx) and (yv > 0 or not logy)
            if visible:
                segment.append(f"{_num(tx(xv))},{_num(ty(yv))}")
            elif segment:
                segments.append(segment)
                segment = []
        if segment:
            segments.append(segment)
        for seg in segments:
            out.append(f'<polyline fill="none" stroke="{color}" stroke-width="1.4" points="{" ".join(seg)}"/>')
        ly = _MARGIN["top"] + 14 + 18 * k
        lx = _MARGIN["left"] + pw + 12
        out.append(f'<line x1="{lx}" y1="{ly}" x2="{lx + 22}" y2="{ly}" stroke="{color}" stroke-width="2"/>')
        out.append(f'<text x="{lx + 28}" y="{ly + 4}">{escape(label)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
