"""SVG outlines of planar bodies, their polars and Petty bodies."""

from __future__ import annotations

import numpy as np

from .bodies import Body, Polygon
from .errors import OrliczError
from .sphere import angles_to_dirs

PALETTE = {"body": "#1f4e79", "polar": "#c55a11", "petty": "#548235"}
SIZE = 480
SAMPLES = 720


def outline(K: Body) -> np.ndarray:
    if K.dim != 2:
        raise OrliczError("SVG rendering is planar")
    if isinstance(K, Polygon):
        return np.asarray(K.vertices)
    U = angles_to_dirs(2 * np.pi * np.arange(SAMPLES) / SAMPLES)
    return np.asarray(K.radial(U))[:, None] * U


def render(layers: dict) -> str:
    """``layers`` maps a palette key to a body; all share one frame centered at the origin."""
    pts = {k: outline(K) for k, K in layers.items() if K is not None}
    if not pts:
        raise OrliczError("nothing to render")
    extent = max(float(np.max(np.abs(p))) for p in pts.values()) * 1.1
    scale = SIZE / (2 * extent)
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<line x1="0" y1="{SIZE / 2:.1f}" x2="{SIZE}" y2="{SIZE / 2:.1f}" stroke="#bbbbbb" stroke-width="0.5"/>',
        f'<line x1="{SIZE / 2:.1f}" y1="0" x2="{SIZE / 2:.1f}" y2="{SIZE}" stroke="#bbbbbb" stroke-width="0.5"/>',
    ]
    for key, p in pts.items():
        color = PALETTE.get(key, "#000000")
        xy = " ".join(f"{SIZE / 2 + scale * x:.4f},{SIZE / 2 - scale * y:.4f}" for x, y in p)
        lines.append(f'<polygon points="{xy}" fill="none" stroke="{color}" stroke-width="1.5">'
                     f"<title>{key}</title></polygon>")
    lines.append("</svg>")
    return "\n".join(lines) + "\n"
