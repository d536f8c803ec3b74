"""Standalone SVG rendering for maps and curves, no plotting dependency."""

from __future__ import annotations

import math

import numpy as np


def _color(t: float) -> str:
    # diverging blue-white-red, t in [0, 1] with 0.5 at unit deviation
    t = min(max(t, 0.0), 1.0)
    if t < 0.5:
        k = t / 0.5
        r, g, b = int(40 + 215 * k), int(90 + 165 * k), 255
    else:
        k = (t - 0.5) / 0.5
        r, g, b = 255, int(255 - 165 * k), int(255 - 215 * k)
    return f"#{r:02x}{g:02x}{b:02x}"


def heatmap(values: np.ndarray, title: str = "", size: int = 420) -> str:
    """Heatmap of ``values[i, j]`` with i along x and j along y, colored in log scale around 1."""
    ni, nf = values.shape
    finite = values[np.isfinite(values) & (values > 0)]
    span = float(np.max(np.abs(np.log(finite)))) if finite.size else 1.0
    span = span or 1.0
    cw, ch = size / ni, size / nf
    pad = 40
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size + 2 * pad}" height="{size + 2 * pad}">',
        f'<text x="{pad}" y="{pad - 12}" font-family="sans-serif" font-size="14">{title}</text>',
    ]
    for i in range(ni):
        for j in range(nf):
            v = values[i, j]
            t = 1.0 if not np.isfinite(v) else 0.5 + 0.5 * math.log(v) / span if v > 0 else 0.0
            x, y = pad + i * cw, pad + size - (j + 1) * ch
            parts.append(f'<rect x="{x:.2f}" y="{y:.2f}" width="{cw + 0.05:.2f}" height="{ch + 0.05:.2f}" fill="{_color(t)}"/>')
    parts.append(f'<text x="{pad + size / 2}" y="{pad + size + 28}" font-family="sans-serif" font-size="12">C_i</text>')
    parts.append(f'<text x="8" y="{pad + size / 2}" font-family="sans-serif" font-size="12">C_f</text>')
    parts.append("</svg>")
    return "\n".join(parts)


def curve(x: np.ndarray, ys: dict[str, np.ndarray], title: str = "", width: int = 480, height: int = 320) -> str:
    """Polyline plot of one or more series sharing the x axis."""
    pad = 44
    all_y = np.concatenate([y[np.isfinite(y)] for y in ys.values()] + [np.array([1.0])])
    y_lo, y_hi = float(all_y.min()), float(all_y.max())
    if y_hi - y_lo < 1e-12:
        y_lo, y_hi = y_lo - 0.5, y_hi + 0.5
    x_lo, x_hi = float(np.min(x)), float(np.max(x))
    x_hi = x_hi if x_hi > x_lo else x_lo + 1.0

    def px(u):
        return pad + (u - x_lo) / (x_hi - x_lo) * (width - 2 * pad)

    def py(v):
        return height - pad - (v - y_lo) / (y_hi - y_lo) * (height - 2 * pad)

    colors = ["#c0392b", "#2e64c9", "#555555", "#27ae60"]
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}">',
        f'<text x="{pad}" y="20" font-family="sans-serif" font-size="14">{title}</text>',
        f'<rect x="{pad}" y="{pad}" width="{width - 2 * pad}" height="{height - 2 * pad}" fill="none" stroke="#999"/>',
        f'<line x1="{pad}" x2="{width - pad}" y1="{py(1.0):.2f}" y2="{py(1.0):.2f}" stroke="#999" stroke-dasharray="4 3"/>',
        f'<text x="4" y="{pad + 4}" font-family="sans-serif" font-size="11">{y_hi:.3g}</text>',
        f'<text x="4" y="{height - pad}" font-family="sans-serif" font-size="11">{y_lo:.3g}</text>',
    ]
    for k, (name, y) in enumerate(ys.items()):
        pts = " ".join(f"{px(u):.2f},{py(v):.2f}" for u, v in zip(x, y) if np.isfinite(v))
        color = colors[k % len(colors)]
        parts.append(f'<polyline points="{pts}" fill="none" stroke="{color}" stroke-width="2"/>')
        parts.append(f'<text x="{width - pad - 110}" y="{pad + 16 + 14 * k}" font-family="sans-serif" font-size="11" fill="{color}">{name}</text>')
    parts.append("</svg>")
    return "\n".join(parts)
