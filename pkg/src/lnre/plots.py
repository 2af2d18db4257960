"""Deterministic figure emission (TSV data files and a small SVG renderer).

No plotting dependency: byte-identical output for identical inputs is part
of the reproducibility contract, so the SVG is assembled from formatted
strings only.
"""

from __future__ import annotations

import numpy as np

_PALETTE = ("#1b6ca8", "#c23b22", "#2e8540", "#8e5ba6", "#b8860b", "#3a3a3a")


def _fmt(x: float) -> str:
    return f"{x:.4f}"


def histogram_tsv(edges, density) -> str:
    lines = ["bin_left\tbin_right\tdensity"]
    for lo, hi, d in zip(edges[:-1], edges[1:], density):
        lines.append(f"{lo!r}\t{hi!r}\t{d!r}")
    return "\n".join(lines) + "\n"


def curves_tsv(grid, curves) -> str:
    """curves: iterable of (label, values-on-grid)."""
    curves = list(curves)
    header = "y\t" + "\t".join(str(label) for label, _ in curves)
    cols = [np.asarray(vals, dtype=float) for _, vals in curves]
    lines = [header]
    for i, y in enumerate(grid):
        lines.append(f"{y!r}\t" + "\t".join(repr(float(c[i])) for c in cols))
    return "\n".join(lines) + "\n"


def render_svg(hist_edges, hist_density, grid, curves, title="") -> str:
    """Histogram bars plus one polyline per curve; fixed 720x480 canvas."""
    curves = [(str(label), np.asarray(vals, dtype=float)) for label, vals in curves]
    width, height, pad = 720, 480, 50.0
    xs = np.asarray(hist_edges, dtype=float)
    x_min = min(xs.min(), float(np.min(grid)))
    x_max = max(xs.max(), float(np.max(grid)))
    y_max = max(
        float(np.max(hist_density)) if len(hist_density) else 0.0,
        max(float(np.max(v)) for _, v in curves) if curves else 0.0,
    )
    y_max = y_max * 1.05 or 1.0

    def sx(x):
        return pad + (x - x_min) / (x_max - x_min) * (width - 2 * pad)

    def sy(y):
        return height - pad - y / y_max * (height - 2 * pad)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">',
        f'<rect width="{width}" height="{height}" fill="white"/>',
    ]
    if title:
        parts.append(
            f'<text x="{width / 2:.1f}" y="24" text-anchor="middle" '
            f'font-family="sans-serif" font-size="15">{title}</text>'
        )
    for lo, hi, d in zip(hist_edges[:-1], hist_edges[1:], hist_density):
        x, w = sx(lo), sx(hi) - sx(lo)
        y = sy(d)
        h = (height - pad) - y
        parts.append(
            f'<rect x="{_fmt(x)}" y="{_fmt(y)}" width="{_fmt(w)}" height="{_fmt(h)}" '
            f'fill="#c9d7e4" stroke="#7793ab" stroke-width="0.5"/>'
        )
    for k, (label, vals) in enumerate(curves):
        color = _PALETTE[k % len(_PALETTE)]
        pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(v))}" for x, v in zip(grid, vals))
        parts.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="1.5"/>'
        )
        parts.append(
            f'<text x="{width - pad - 4:.1f}" y="{pad + 16 * k + 4:.1f}" '
            f'text-anchor="end" font-family="sans-serif" font-size="12" '
            f'fill="{color}">{label}</text>'
        )
    # axes
    parts.append(
        f'<line x1="{pad}" y1="{height - pad}" x2="{width - pad}" y2="{height - pad}" '
        f'stroke="black" stroke-width="1"/>'
    )
    parts.append(
        f'<line x1="{pad}" y1="{pad}" x2="{pad}" y2="{height - pad}" '
        f'stroke="black" stroke-width="1"/>'
    )
    for frac in (0.0, 0.25, 0.5, 0.75, 1.0):
        xv = x_min + frac * (x_max - x_min)
        parts.append(
            f'<text x="{_fmt(sx(xv))}" y="{height - pad + 18:.1f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="11">{xv:.4g}</text>'
        )
        yv = frac * y_max
        parts.append(
            f'<text x="{pad - 6:.1f}" y="{_fmt(sy(yv) + 4)}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{yv:.4g}</text>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
