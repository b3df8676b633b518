"""Winding numbers of closed polygonal paths and Green's-theorem checks.

Winding numbers are computed by summing signed turning angles of the
vertices about the query point, which returns exact integers for
polygons without any branch-cut bookkeeping.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from ._quad import line_integral
from .paths import PiecewisePath

ON_TRACE_EPS = 1e-9


def _segment_distances(p: PiecewisePath, pts: np.ndarray) -> np.ndarray:
    """Distance from each point (n, 2) to the nearest path segment."""
    verts = p.vertices
    a = verts[:-1]
    seg = np.diff(verts, axis=0)
    seg_len2 = (seg**2).sum(axis=1)
    best = np.full(pts.shape[0], np.inf)
    for i in range(len(a)):
        rel = pts - a[i]
        t = np.clip((rel @ seg[i]) / seg_len2[i], 0.0, 1.0)
        proj = a[i] + t[:, None] * seg[i]
        best = np.minimum(best, np.linalg.norm(pts - proj, axis=1))
    return best


def _turning_sums(p: PiecewisePath, pts: np.ndarray) -> np.ndarray:
    """Total signed angle swept by the path about each point."""
    verts = p.vertices
    total = np.zeros(pts.shape[0])
    for i in range(len(verts) - 1):
        u = verts[i] - pts
        v = verts[i + 1] - pts
        cross = u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]
        dot = (u * v).sum(axis=1)
        total += np.arctan2(cross, dot)
    return total


def winding_number(p: PiecewisePath, point: Sequence[float], eps: float = ON_TRACE_EPS) -> int:
    """Integer winding number of a closed planar path about a point."""
    if not p.is_real_planar():
        raise ValueError("winding numbers need a real planar path")
    if not p.is_closed():
        raise ValueError("winding numbers are defined for closed paths")
    pt = np.asarray(point, dtype=float).reshape(1, 2)
    if float(_segment_distances(p, pt)[0]) <= eps:
        raise ValueError("point lies on the path trace")
    total = float(_turning_sums(p, pt)[0]) / (2.0 * math.pi)
    rounded = round(total)
    if abs(total - rounded) > 0.25:
        raise ArithmeticError("turning-angle sum is not close to an integer")
    return int(rounded)


@dataclass
class WindingGrid:
    """Winding numbers sampled on a rectangular grid of cell centers.

    Cells whose center is within the masking radius of the trace carry
    no value; unmasked entries are exact integers.
    """

    bounds: tuple[float, float, float, float]
    nx: int
    ny: int
    values: np.ndarray  # (ny, nx) int
    mask: np.ndarray  # (ny, nx) bool, True = too close to the trace

    def cell_area(self) -> float:
        x0, x1, y0, y1 = self.bounds
        return (x1 - x0) / self.nx * (y1 - y0) / self.ny

    def centers(self) -> tuple[np.ndarray, np.ndarray]:
        x0, x1, y0, y1 = self.bounds
        xs = x0 + (np.arange(self.nx) + 0.5) * (x1 - x0) / self.nx
        ys = y0 + (np.arange(self.ny) + 0.5) * (y1 - y0) / self.ny
        return xs, ys

    def to_json_dict(self) -> dict:
        """Matrix export for external plotting; masked cells are null."""
        vals = [
            [None if self.mask[j, i] else int(self.values[j, i]) for i in range(self.nx)]
            for j in range(self.ny)
        ]
        return {"bounds": list(self.bounds), "nx": self.nx, "ny": self.ny, "values": vals}


def winding_field(
    p: PiecewisePath,
    bounds: tuple[float, float, float, float],
    nx: int,
    ny: int,
    mask_radius: float | None = None,
) -> WindingGrid:
    """Winding number at every unmasked grid cell center."""
    if not p.is_closed():
        raise ValueError("winding fields are defined for closed paths")
    x0, x1, y0, y1 = bounds
    xs = x0 + (np.arange(nx) + 0.5) * (x1 - x0) / nx
    ys = y0 + (np.arange(ny) + 0.5) * (y1 - y0) / ny
    gx, gy = np.meshgrid(xs, ys)
    pts = np.column_stack([gx.ravel(), gy.ravel()])
    if mask_radius is None:
        cell_diag = math.hypot((x1 - x0) / nx, (y1 - y0) / ny)
        mask_radius = 2.0 * ON_TRACE_EPS + 0.5 * cell_diag
    dist = _segment_distances(p, pts)
    mask = (dist <= mask_radius).reshape(ny, nx)
    totals = _turning_sums(p, pts) / (2.0 * math.pi)
    values = np.rint(totals).astype(int).reshape(ny, nx)
    values[mask] = 0
    return WindingGrid((x0, x1, y0, y1), nx, ny, values, mask)


@dataclass(frozen=True)
class GaussianBump:
    """amplitude * exp(-((x-cx)^2 + (y-cy)^2) / (2 sigma^2))."""

    amplitude: float
    cx: float
    cy: float
    sigma: float

    def __call__(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self.amplitude * np.exp(
            -((xs - self.cx) ** 2 + (ys - self.cy) ** 2) / (2.0 * self.sigma**2)
        )

    def dx(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return -(xs - self.cx) / self.sigma**2 * self(xs, ys)

    def dy(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return -(ys - self.cy) / self.sigma**2 * self(xs, ys)


def green_residual(
    p: PiecewisePath,
    f: GaussianBump | None,
    g: GaussianBump | None,
    resolution: int = 400,
    bounds: tuple[float, float, float, float] | None = None,
    pad: float = 0.75,
) -> float:
    """Green's-theorem residual for self-intersecting closed paths.

    Compares the winding-weighted area integral of div(f, g) (midpoint
    rule on a grid of cell centers, computed at every off-trace center)
    with the line integral of f dy - g dx (panel quadrature).
    """
    if not p.is_closed():
        raise ValueError("the Green check needs a closed path")
    if f is None and g is None:
        return 0.0
    if bounds is None:
        verts = p.vertices
        bounds = (
            float(verts[:, 0].min() - pad),
            float(verts[:, 0].max() + pad),
            float(verts[:, 1].min() - pad),
            float(verts[:, 1].max() + pad),
        )
    grid = winding_field(p, bounds, resolution, resolution, mask_radius=ON_TRACE_EPS)
    xs, ys = grid.centers()
    gx, gy = np.meshgrid(xs, ys)
    div = np.zeros_like(gx)
    if f is not None:
        div += f.dx(gx, gy)
    if g is not None:
        div += g.dy(gx, gy)
    area = float((div * grid.values).sum() * grid.cell_area())

    f_dy = f if f is not None else None
    g_dx = g if g is not None else None
    line = line_integral(
        p,
        (lambda X, Y: -g_dx(X, Y)) if g_dx is not None else None,
        f_dy,
        tol=1e-12,
    )
    return abs(area - complex(line).real)


def windapp_diagnostic(
    p: PiecewisePath,
    points: Sequence[Sequence[float]],
    n_quad: int = 2048,
) -> dict:
    """Row-average diagnostic for the winding number of the closed hull.

    For a path from (0,0) to (1,0) with trace inside the unit vertical
    strip, closes it with the return chord and reports, per sample
    point, |eta(x, y) - integral_0^1 eta(v, y) dv| with the row integral
    by midpoint quadrature over off-trace nodes.  The underlying
    line-integral hypothesis is not checkable here, so this reports and
    never asserts.
    """
    start_ok = bool(np.linalg.norm(p.start - (0.0, 0.0)) <= 1e-9)
    end_ok = bool(np.linalg.norm(p.end - (1.0, 0.0)) <= 1e-9)
    xs_all = p.vertices[:, 0]
    strip_ok = bool(xs_all.min() >= -1e-12 and xs_all.max() <= 1.0 + 1e-12)
    if not (start_ok and end_ok and strip_ok):
        return {
            "applicable": False,
            "start_ok": start_ok,
            "end_ok": end_ok,
            "strip_ok": strip_ok,
            "rows": [],
        }
    closed = PiecewisePath(np.vstack([p.vertices, [p.start]]))
    rows = []
    vs = (np.arange(n_quad) + 0.5) / n_quad
    for x, y in points:
        pt = np.array([[float(x), float(y)]])
        if float(_segment_distances(closed, pt)[0]) <= ON_TRACE_EPS:
            rows.append({"point": [float(x), float(y)], "skipped": True})
            continue
        eta_here = winding_number(closed, (x, y))
        sample_pts = np.column_stack([vs, np.full_like(vs, float(y))])
        ok = _segment_distances(closed, sample_pts) > ON_TRACE_EPS
        totals = _turning_sums(closed, sample_pts[ok]) / (2.0 * math.pi)
        row_avg = float(np.rint(totals).sum() / n_quad)
        rows.append(
            {
                "point": [float(x), float(y)],
                "skipped": False,
                "eta": eta_here,
                "row_average": row_avg,
                "residual": abs(eta_here - row_avg),
            }
        )
    return {"applicable": True, "rows": rows}
