"""Minimal static SVG charts. Geometry is for viewing only."""
from __future__ import annotations

from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

_W, _H, _PAD = 640, 360, 40
_COLORS = ("#1f77b4", "#ff7f0e", "#2ca02c", "#d62728")


def _frame(title: str, body: list[str]) -> str:
    return "\n".join(
        [
            f'<svg xmlns="http://www.w3.org/2000/svg" width="{_W}" height="{_H}" '
            f'viewBox="0 0 {_W} {_H}">',
            '<rect width="100%" height="100%" fill="white"/>',
            f'<text x="{_W / 2}" y="20" text-anchor="middle" font-family="sans-serif" '
            f'font-size="14">{title}</text>',
            f'<line x1="{_PAD}" y1="{_H - _PAD}" x2="{_W - _PAD}" y2="{_H - _PAD}" stroke="black"/>',
            f'<line x1="{_PAD}" y1="{_PAD}" x2="{_PAD}" y2="{_H - _PAD}" stroke="black"/>',
            *body,
            "</svg>",
            "",
        ]
    )


def bar_chart_svg(values: Sequence[float], path, title: str = "") -> Path:
    """One bar per instance on a [0, 1] axis with a red line at the mean."""
    values = np.asarray(values, dtype=float)
    n = max(values.size, 1)
    span_x = _W - 2 * _PAD
    span_y = _H - 2 * _PAD
    bw = span_x / n
    body = []
    for i, v in enumerate(values):
        h = span_y * min(max(v, 0.0), 1.0)
        body.append(
            f'<rect x="{_PAD + i * bw + 0.1 * bw:.2f}" y="{_H - _PAD - h:.2f}" '
            f'width="{0.8 * bw:.2f}" height="{h:.2f}" fill="{_COLORS[0]}"/>'
        )
    if values.size:
        y = _H - _PAD - span_y * float(values.mean())
        body.append(
            f'<line x1="{_PAD}" y1="{y:.2f}" x2="{_W - _PAD}" y2="{y:.2f}" '
            'stroke="red" stroke-width="2"/>'
        )
    path = Path(path)
    path.write_text(_frame(title, body), encoding="utf-8")
    return path


def density_svg(curves: Mapping[str, tuple[np.ndarray, np.ndarray]], path, title: str = "") -> Path:
    """Overlay density polylines sharing one set of axes."""
    body = []
    if curves:
        xs = np.concatenate([g for g, _ in curves.values()])
        ys = np.concatenate([d for _, d in curves.values()])
        x0, x1 = float(xs.min()), float(xs.max())
        y1 = float(ys.max()) or 1.0
        for k, (label, (g, d)) in enumerate(curves.items()):
            px = _PAD + (g - x0) / ((x1 - x0) or 1.0) * (_W - 2 * _PAD)
            py = _H - _PAD - d / y1 * (_H - 2 * _PAD)
            pts = " ".join(f"{a:.2f},{b:.2f}" for a, b in zip(px, py))
            color = _COLORS[k % len(_COLORS)]
            body.append(f'<polyline fill="none" stroke="{color}" stroke-width="2" points="{pts}"/>')
            body.append(
                f'<text x="{_W - _PAD - 150}" y="{_PAD + 16 * k}" font-family="sans-serif" '
                f'font-size="12" fill="{color}">{label}</text>'
            )
    path = Path(path)
    path.write_text(_frame(title, body), encoding="utf-8")
    return path
