"""Dependency-free SVG rendering of solvability latent maps.

Probabilities color a red-to-blue gradient (red = likely unsolved, blue =
likely solved); labeled training points draw as filled circles and unlabeled
ones as stars.  Pure text emission keeps the output diffable in tests.
"""

from __future__ import annotations

import math

import numpy as np

from .ml.solvability import SolvabilityReport

_RED = (178, 24, 43)
_WHITE = (247, 247, 247)
_BLUE = (33, 102, 172)

WIDTH = 640
HEIGHT = 560
MARGIN = 60


def _prob_color(p: float) -> str:
    p = min(max(p, 0.0), 1.0)
    if p < 0.5:
        lo, hi, t = _RED, _WHITE, p / 0.5
    else:
        lo, hi, t = _WHITE, _BLUE, (p - 0.5) / 0.5
    rgb = tuple(round(a + (b - a) * t) for a, b in zip(lo, hi))
    return f"rgb({rgb[0]},{rgb[1]},{rgb[2]})"


def _star_path(cx: float, cy: float, r: float) -> str:
    points = []
    for i in range(10):
        radius = r if i % 2 == 0 else r * 0.45
        angle = -math.pi / 2 + i * math.pi / 5
        points.append(f"{cx + radius * math.cos(angle):.2f},{cy + radius * math.sin(angle):.2f}")
    return " ".join(points)


def render_latent_map(report: SolvabilityReport, title: str) -> str:
    """Render the sampled latent map and training markers as an SVG document."""
    bounds = np.asarray(report.bounds, dtype=float)
    span = bounds[:, 1] - bounds[:, 0]
    span = np.where(span == 0.0, 1.0, span)

    def to_px(pt) -> tuple[float, float]:
        x = MARGIN + (pt[0] - bounds[0, 0]) / span[0] * (WIDTH - 2 * MARGIN)
        y = HEIGHT - MARGIN - (pt[1] - bounds[1, 0]) / span[1] * (HEIGHT - 2 * MARGIN)
        return x, y

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f"<!-- {title} -->",
        f'<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.0f}" y="28" text-anchor="middle" '
        f'font-family="sans-serif" font-size="16">{title}</text>',
    ]

    pts = np.asarray(report.latent_points, dtype=float)
    probs = np.asarray(report.probabilities, dtype=float)
    if report.grid_resolution:
        r = report.grid_resolution
        cw = (WIDTH - 2 * MARGIN) / max(r - 1, 1)
        ch = (HEIGHT - 2 * MARGIN) / max(r - 1, 1)
        for pt, p in zip(pts, probs):
            x, y = to_px(pt)
            parts.append(
                f'<rect x="{x - cw / 2:.2f}" y="{y - ch / 2:.2f}" '
                f'width="{cw:.2f}" height="{ch:.2f}" fill="{_prob_color(p)}"/>'
            )
    else:
        for pt, p in zip(pts[:, :2], probs):
            x, y = to_px(pt)
            parts.append(f'<circle cx="{x:.2f}" cy="{y:.2f}" r="2.5" fill="{_prob_color(p)}"/>')

    for row, label in zip(report.training_embedding, report.training_labels):
        x, y = to_px(np.asarray(row, dtype=float)[:2])
        if label is None:
            parts.append(
                f'<polygon points="{_star_path(x, y, 7.0)}" fill="gold" '
                f'stroke="black" stroke-width="0.8"/>'
            )
        else:
            fill = "rgb(5,48,97)" if label else "rgb(103,0,31)"
            parts.append(
                f'<circle cx="{x:.2f}" cy="{y:.2f}" r="4.5" fill="{fill}" '
                f'stroke="white" stroke-width="1"/>'
            )

    axis_y = HEIGHT - MARGIN
    parts.extend(
        [
            f'<rect x="{MARGIN}" y="{MARGIN}" width="{WIDTH - 2 * MARGIN}" '
            f'height="{HEIGHT - 2 * MARGIN}" fill="none" stroke="black"/>',
            f'<text x="{WIDTH / 2:.0f}" y="{axis_y + 36}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13">latent axis 1</text>',
            f'<text x="20" y="{HEIGHT / 2:.0f}" text-anchor="middle" '
            f'font-family="sans-serif" font-size="13" '
            f'transform="rotate(-90 20 {HEIGHT / 2:.0f})">latent axis 2</text>',
            f'<text x="{MARGIN}" y="{axis_y + 18}" font-family="sans-serif" '
            f'font-size="11">{bounds[0, 0]:.3g}</text>',
            f'<text x="{WIDTH - MARGIN}" y="{axis_y + 18}" text-anchor="end" '
            f'font-family="sans-serif" font-size="11">{bounds[0, 1]:.3g}</text>',
            "</svg>",
        ]
    )
    return "\n".join(parts) + "\n"
