"""Minimal deterministic SVG line charts for CLI output."""

from __future__ import annotations

import numpy as np

_WIDTH = 640
_HEIGHT = 400
_MARGIN = 56
_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd")


def _fmt(value: float) -> str:
    return f"{value:.6g}"


def line_chart(x, series, title: str, x_label: str, y_label: str) -> str:
    """Render one or more (label, y-array) series against a shared x axis.

    Output is plain SVG 1.1 with fixed formatting, so identical inputs
    produce identical bytes.
    """
    x = np.asarray(x, dtype=float)
    ys = [(label, np.asarray(y, dtype=float)) for label, y in series]
    x_lo, x_hi = float(np.min(x)), float(np.max(x))
    y_all = np.concatenate([y for _, y in ys])
    y_lo, y_hi = float(np.min(y_all)), float(np.max(y_all))
    if x_hi == x_lo:
        x_hi = x_lo + 1.0
    if y_hi == y_lo:
        y_hi = y_lo + 1.0
    pad = 0.05 * (y_hi - y_lo)
    y_lo -= pad
    y_hi += pad
    plot_w = _WIDTH - 2 * _MARGIN
    plot_h = _HEIGHT - 2 * _MARGIN

    def sx(v: float) -> float:
        return _MARGIN + (v - x_lo) / (x_hi - x_lo) * plot_w

    def sy(v: float) -> float:
        return _HEIGHT - _MARGIN - (v - y_lo) / (y_hi - y_lo) * plot_h

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_WIDTH}" height="{_HEIGHT}" '
        f'viewBox="0 0 {_WIDTH} {_HEIGHT}">',
        f'<rect x="0" y="0" width="{_WIDTH}" height="{_HEIGHT}" '
        f'fill="white"/>',
        f'<rect x="{_MARGIN}" y="{_MARGIN}" width="{plot_w}" '
        f'height="{plot_h}" fill="none" stroke="#333333"/>',
        f'<text x="{_WIDTH // 2}" y="24" text-anchor="middle" '
        f'font-family="monospace" font-size="14">{title}</text>',
        f'<text x="{_WIDTH // 2}" y="{_HEIGHT - 12}" text-anchor="middle" '
        f'font-family="monospace" font-size="12">{x_label}</text>',
        f'<text x="16" y="{_HEIGHT // 2}" text-anchor="middle" '
        f'font-family="monospace" font-size="12" '
        f'transform="rotate(-90 16 {_HEIGHT // 2})">{y_label}</text>',
        f'<text x="{_MARGIN}" y="{_HEIGHT - _MARGIN + 16}" '
        f'text-anchor="middle" font-family="monospace" font-size="10">'
        f'{_fmt(x_lo)}</text>',
        f'<text x="{_WIDTH - _MARGIN}" y="{_HEIGHT - _MARGIN + 16}" '
        f'text-anchor="middle" font-family="monospace" font-size="10">'
        f'{_fmt(x_hi)}</text>',
        f'<text x="{_MARGIN - 6}" y="{_HEIGHT - _MARGIN}" '
        f'text-anchor="end" font-family="monospace" font-size="10">'
        f'{_fmt(y_lo)}</text>',
        f'<text x="{_MARGIN - 6}" y="{_MARGIN + 10}" text-anchor="end" '
        f'font-family="monospace" font-size="10">{_fmt(y_hi)}</text>',
    ]
    for n, (label, y) in enumerate(ys):
        color = _COLORS[n % len(_COLORS)]
        points = " ".join(
            f"{_fmt(sx(float(xv)))},{_fmt(sy(float(yv)))}"
            for xv, yv in zip(x, y))
        parts.append(f'<polyline fill="none" stroke="{color}" '
                     f'stroke-width="1.5" points="{points}"/>')
        parts.append(
            f'<text x="{_WIDTH - _MARGIN - 4}" y="{_MARGIN + 16 + 14 * n}" '
            f'text-anchor="end" font-family="monospace" font-size="11" '
            f'fill="{color}">{label}</text>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
