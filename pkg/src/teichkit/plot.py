"""Deterministic CSV and SVG artifacts.

CSV columns:

* boundary files: ``theta,re,im``, one row per boundary sample;
* heat files: ``re,im,weighted_modulus``, one row per node of the norm grid;
* residual files: ``t,residual``.
"""

import numpy as np

from .disk_maps import EvaluationGrid
from .metrics import weighted_modulus

PALETTE = ("#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b")


def _fmt(x):
    return repr(float(x))


def csv_text(header, rows):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    return "\n".join(lines) + "\n"


def sample_circle(n, radius=1.0):
    theta = 2 * np.pi * np.arange(n) / n
    return theta, radius * np.exp(1j * theta)


def boundary_csv(theta, points):
    return csv_text(("theta", "re", "im"), zip(theta, np.real(points), np.imag(points)))


def heat_csv(phi, grid=None):
    grid = grid or EvaluationGrid()
    z = grid.nodes
    w = weighted_modulus(phi, z)
    return csv_text(("re", "im", "weighted_modulus"), zip(z.real, z.imag, w))


def residual_csv(ts, residuals):
    return csv_text(("t", "residual"), zip(np.abs(ts), residuals))


def svg_paths(curves, size=480, pad=0.05):
    """SVG document drawing each closed polyline; the y axis points up."""
    finite = [c[np.isfinite(c)] for c in curves]
    pts = np.concatenate(finite) if finite else np.zeros(1, complex)
    lo_x, hi_x = pts.real.min(), pts.real.max()
    lo_y, hi_y = pts.imag.min(), pts.imag.max()
    span = max(hi_x - lo_x, hi_y - lo_y, 1e-12) * (1 + 2 * pad)
    cx, cy = (lo_x + hi_x) / 2, (lo_y + hi_y) / 2
    scale = size / span

    def xy(p):
        return (p.real - cx) * scale + size / 2, size / 2 - (p.imag - cy) * scale

    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
           f'viewBox="0 0 {size} {size}">']
    for k, c in enumerate(finite):
        coords = [xy(p) for p in c]
        d = "M " + " L ".join(f"{x:.4f} {y:.4f}" for x, y in coords) + " Z"
        out.append(f'  <path d="{d}" fill="none" stroke="{PALETTE[k % len(PALETTE)]}" '
                   f'stroke-width="1"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
