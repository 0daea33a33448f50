"""Band diagrams written directly as SVG."""
from __future__ import annotations

from typing import Sequence
from xml.sax.saxutils import escape

import numpy as np

WIDTH, HEIGHT = 720, 480
LEFT, RIGHT, TOP, BOTTOM = 70, 20, 30, 50
COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22")


def _fmt(x: float) -> str:
    return f"{x:.2f}"


def band_diagram(
    table: np.ndarray,
    path_count: int,
    shaded: Sequence[tuple[float, float, str]] = (),
    title: str = "",
    ylabel: str = "lambda",
) -> str:
    """Dispersion curves over the first ``path_count`` samples, remaining
    samples as dots, and shaded horizontal bands ``(lower, upper, label)``."""
    m, count = table.shape
    ymax = float(table.max()) * 1.05 if table.size else 1.0
    ymin = min(0.0, float(table.min()))
    for lo, hi, _ in shaded:
        ymax = max(ymax, hi * 1.02)
    span = ymax - ymin or 1.0
    plot_w = WIDTH - LEFT - RIGHT
    plot_h = HEIGHT - TOP - BOTTOM

    def x_of(i: int) -> float:
        return LEFT + plot_w * i / max(count - 1, 1)

    def y_of(v: float) -> float:
        return TOP + plot_h * (1.0 - (v - ymin) / span)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
    ]
    for lo, hi, label in shaded:
        y1, y2 = y_of(hi), y_of(lo)
        out.append(
            f'<rect class="certified" x="{LEFT}" y="{_fmt(y1)}" width="{plot_w}" '
            f'height="{_fmt(max(y2 - y1, 0.5))}" fill="#ffd54f" fill-opacity="0.5">'
            f"<title>{escape(label)}</title></rect>"
        )
    out.append(
        f'<rect x="{LEFT}" y="{TOP}" width="{plot_w}" height="{plot_h}" '
        'fill="none" stroke="black"/>'
    )
    if 0 < path_count < count:
        xs = _fmt((x_of(path_count - 1) + x_of(path_count)) / 2)
        out.append(f'<line x1="{xs}" y1="{TOP}" x2="{xs}" y2="{TOP + plot_h}" '
                   'stroke="#999" stroke-dasharray="4 3"/>')
    for j in range(m):
        color = COLORS[j % len(COLORS)]
        pts = " ".join(f"{_fmt(x_of(i))},{_fmt(y_of(table[j, i]))}" for i in range(path_count))
        if path_count > 1:
            out.append(f'<polyline class="band" points="{pts}" fill="none" '
                       f'stroke="{color}" stroke-width="1.5"/>')
        for i in range(path_count, count):
            out.append(f'<circle cx="{_fmt(x_of(i))}" cy="{_fmt(y_of(table[j, i]))}" '
                       f'r="2" fill="{color}"/>')
    for t in np.linspace(ymin, ymax, 6):
        y = _fmt(y_of(t))
        out.append(f'<line x1="{LEFT - 4}" y1="{y}" x2="{LEFT}" y2="{y}" stroke="black"/>')
        out.append(f'<text x="{LEFT - 8}" y="{y}" font-size="11" text-anchor="end" '
                   f'dominant-baseline="middle">{t:.4g}</text>')
    out.append(f'<text x="{LEFT + plot_w / 2}" y="{HEIGHT - 12}" font-size="12" '
               'text-anchor="middle">alpha samples (path, then interior)</text>')
    out.append(f'<text x="16" y="{TOP + plot_h / 2}" font-size="12" text-anchor="middle" '
               f'transform="rotate(-90 16 {TOP + plot_h / 2})">{escape(ylabel)}</text>')
    if title:
        out.append(f'<text x="{LEFT + plot_w / 2}" y="18" font-size="13" '
                   f'text-anchor="middle">{escape(title)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
