"""Adaptive Gauss-Legendre line integration along piecewise-linear paths."""

from __future__ import annotations

from typing import Callable

import numpy as np

from .paths import PiecewisePath

_NODES, _WEIGHTS = np.polynomial.legendre.leggauss(32)


def line_integral(
    p: PiecewisePath,
    f: Callable[[np.ndarray, np.ndarray], np.ndarray] | None,
    g: Callable[[np.ndarray, np.ndarray], np.ndarray] | None,
    tol: float = 1e-10,
    max_refine: int = 8,
) -> complex:
    """Integral of f dx + g dy with order-32 panels per segment.

    Each segment starts as one panel and the whole path is refined by
    panel doubling until two successive results differ by less than
    ``tol`` (or the refinement cap is hit).
    """
    if not p.is_real_planar():
        raise ValueError("quadrature path must be real planar")
    verts = p.vertices
    x0, y0 = verts[:-1, 0], verts[:-1, 1]
    dx, dy = np.diff(verts[:, 0]), np.diff(verts[:, 1])

    def evaluate(panels: int) -> complex:
        # panel-local nodes mapped to [0, 1] fractions of each segment
        offs = (np.arange(panels)[:, None] + (_NODES[None, :] + 1.0) / 2.0) / panels
        w = _WEIGHTS[None, :] / (2.0 * panels)
        total = 0.0 + 0.0j
        for i in range(len(dx)):
            xs = x0[i] + dx[i] * offs
            ys = y0[i] + dy[i] * offs
            acc = np.zeros_like(xs, dtype=np.complex128)
            if f is not None and dx[i] != 0.0:
                acc += np.asarray(f(xs, ys)) * dx[i]
            if g is not None and dy[i] != 0.0:
                acc += np.asarray(g(xs, ys)) * dy[i]
            total += complex((acc * w).sum())
        return total

    prev = evaluate(1)
    panels = 2
    for _ in range(max_refine):
        cur = evaluate(panels)
        if abs(cur - prev) < tol:
            return cur
        prev = cur
        panels *= 2
    return prev
