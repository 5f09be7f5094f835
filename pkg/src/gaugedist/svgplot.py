"""Deterministic log-log SVG plots for decay scans.

The emitter is a pure function of its inputs: fixed canvas, fixed
element order, and fixed number formatting, so identical samples give
byte-identical documents.  No timestamps, no randomness, no external
assets.
"""

from __future__ import annotations

import math
from typing import Optional, Sequence

import numpy as np

from .errors import PlotDataError

_W, _H = 800, 600
_ML, _MR, _MT, _MB = 80, 24, 44, 72
_DOT = "#1f77b4"
_LINE = "#d62728"
_GRID = "#cccccc"
_TEXT = "#333333"


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def _ticks(lo: float, hi: float):
    """Decade tick exponents covering [lo, hi] in log10 units."""
    return list(range(math.floor(lo), math.ceil(hi) + 1))


def svg_decay_plot(R: Sequence[float], values: Sequence[float], profile=None, *,
                   title: str = "decay scan", xlabel: str = "R",
                   ylabel: str = "value") -> str:
    """Render samples (and an optional fitted profile) as an SVG document.

    Non-positive values are dropped and the drop count annotated; fewer
    than 2 usable points is an error and nothing is rendered.  The
    profile, when given, is drawn from its own prediction over the
    sample range, so a log-corrected fit shows its genuine curvature.
    """
    R = np.asarray(R, dtype=float)
    values = np.asarray(values, dtype=float)
    if R.shape != values.shape or R.ndim != 1:
        raise PlotDataError("R and values must be 1d arrays of equal length")
    good = (values > 0) & (R > 0)
    dropped = int(np.sum(~good))
    R, values = R[good], values[good]
    if len(R) < 2:
        raise PlotDataError(f"need at least 2 positive samples, have {len(R)}")
    order = np.argsort(R)
    R, values = R[order], values[order]

    lx, ly = np.log10(R), np.log10(values)
    pad_x = 0.04 * max(lx[-1] - lx[0], 0.1)
    lo_x, hi_x = lx[0] - pad_x, lx[-1] + pad_x
    pad_y = 0.04 * max(ly.max() - ly.min(), 0.1)
    lo_y, hi_y = ly.min() - pad_y, ly.max() + pad_y

    def px(v: float) -> float:
        return _ML + (v - lo_x) / (hi_x - lo_x) * (_W - _ML - _MR)

    def py(v: float) -> float:
        return _H - _MB - (v - lo_y) / (hi_y - lo_y) * (_H - _MT - _MB)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
        f'viewBox="0 0 {_W} {_H}">',
        f'<rect x="0" y="0" width="{_W}" height="{_H}" fill="#ffffff"/>',
        f'<text x="{_W // 2}" y="24" text-anchor="middle" font-family="monospace" '
        f'font-size="16" fill="{_TEXT}">{title}</text>',
    ]
    # grid and tick labels at decades
    for e in _ticks(lo_x, hi_x):
        if lo_x <= e <= hi_x:
            x = _fmt(px(e))
            parts.append(f'<line x1="{x}" y1="{_MT}" x2="{x}" y2="{_H - _MB}" '
                         f'stroke="{_GRID}" stroke-width="1"/>')
            parts.append(f'<text x="{x}" y="{_H - _MB + 18}" text-anchor="middle" '
                         f'font-family="monospace" font-size="12" fill="{_TEXT}">1e{e}</text>')
    for e in _ticks(lo_y, hi_y):
        if lo_y <= e <= hi_y:
            y = _fmt(py(e))
            parts.append(f'<line x1="{_ML}" y1="{y}" x2="{_W - _MR}" y2="{y}" '
                         f'stroke="{_GRID}" stroke-width="1"/>')
            parts.append(f'<text x="{_ML - 8}" y="{y}" text-anchor="end" dy="4" '
                         f'font-family="monospace" font-size="12" fill="{_TEXT}">1e{e}</text>')
    # frame
    parts.append(f'<rect x="{_ML}" y="{_MT}" width="{_W - _ML - _MR}" '
                 f'height="{_H - _MT - _MB}" fill="none" stroke="{_TEXT}" stroke-width="1"/>')
    # axis labels
    parts.append(f'<text x="{_W // 2}" y="{_H - 26}" text-anchor="middle" '
                 f'font-family="monospace" font-size="13" fill="{_TEXT}">{xlabel}</text>')
    parts.append(f'<text x="20" y="{_H // 2}" text-anchor="middle" font-family="monospace" '
                 f'font-size="13" fill="{_TEXT}" transform="rotate(-90 20 {_H // 2})">{ylabel}</text>')

    # fitted curve under the dots
    caption = ""
    if profile is not None:
        grid = np.geomspace(R[0], R[-1], 64)
        pred = profile.predict(grid)
        pos = pred > 0
        pts = " ".join(f"{_fmt(px(a))},{_fmt(py(b))}"
                       for a, b in zip(np.log10(grid[pos]), np.log10(pred[pos])))
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{_LINE}" '
                     f'stroke-width="2"/>')
        caption = (f"slope={-profile.gamma:.2f}  gamma={profile.gamma:.4f}  "
                   f"C={profile.amplitude:.4g}  residual={profile.residual:.3g}  ")
    for a, b in zip(lx, ly):
        parts.append(f'<circle class="dot" cx="{_fmt(px(a))}" cy="{_fmt(py(b))}" r="3" '
                     f'fill="{_DOT}"/>')
    parts.append(f'<text x="{_ML}" y="{_H - 8}" font-family="monospace" font-size="12" '
                 f'fill="{_TEXT}">{caption}dropped={dropped}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
