"""Piecewise-linear paths: constructors, surgery and normalisation.

A path is a finite list of vertices joined by straight segments.  Time
is vertex/segment based (a :class:`PathTime` is a segment index plus a
fraction), since every quantity computed downstream is invariant under
reparametrisation.
"""

from __future__ import annotations

from typing import NamedTuple, Sequence

import numpy as np

ENDPOINT_TOL = 1e-12


class PathTime(NamedTuple):
    """A location on a path: segment index and fraction within it."""

    segment: int
    fraction: float


class PiecewisePath:
    """Finite vertex list in R^d or C^d with linear interpolation.

    Consecutive duplicate vertices are collapsed on construction, so
    every stored segment has a nonzero increment.
    """

    __slots__ = ("vertices", "name")

    def __init__(self, vertices: Sequence[Sequence[complex]], name: str | None = None):
        arr = np.asarray(vertices)
        if arr.ndim != 2 or arr.shape[0] < 1:
            raise ValueError("need a (k, d) array with at least one vertex")
        if np.iscomplexobj(arr):
            arr = arr.astype(np.complex128)
        else:
            arr = arr.astype(np.float64)
        if not np.all(np.isfinite(arr.view(np.float64) if arr.dtype == np.complex128 else arr)):
            raise ValueError("vertices must be finite")
        keep = [0]
        for i in range(1, arr.shape[0]):
            if np.linalg.norm(arr[i] - arr[keep[-1]]) > 0.0:
                keep.append(i)
        self.vertices = arr[keep]
        self.name = name

    # -- basic geometry -------------------------------------------------

    @property
    def dimension(self) -> int:
        return self.vertices.shape[1]

    @property
    def n_segments(self) -> int:
        return self.vertices.shape[0] - 1

    @property
    def start(self) -> np.ndarray:
        return self.vertices[0]

    @property
    def end(self) -> np.ndarray:
        return self.vertices[-1]

    def increments(self) -> np.ndarray:
        return np.diff(self.vertices, axis=0)

    def is_closed(self, tol: float = ENDPOINT_TOL) -> bool:
        return bool(np.linalg.norm(self.end - self.start) <= tol)

    def is_real_planar(self) -> bool:
        return self.dimension == 2 and not np.iscomplexobj(self.vertices)

    def point_at(self, t: PathTime) -> np.ndarray:
        seg, frac = t
        if self.n_segments == 0:
            if seg == 0 and frac in (0.0, 1.0):
                return self.vertices[0].copy()
            raise ValueError("degenerate path has a single point")
        if not 0 <= seg < self.n_segments:
            raise ValueError(f"segment {seg} outside 0..{self.n_segments - 1}")
        if not 0.0 <= frac <= 1.0:
            raise ValueError("fraction must lie in [0, 1]")
        return self.vertices[seg] * (1 - frac) + self.vertices[seg + 1] * frac

    def path_start(self) -> PathTime:
        return PathTime(0, 0.0)

    def path_end(self) -> PathTime:
        return PathTime(max(self.n_segments - 1, 0), 1.0)

    def __repr__(self) -> str:  # pragma: no cover
        label = f" {self.name!r}" if self.name else ""
        return f"PiecewisePath({self.n_segments} segments, d={self.dimension}{label})"


def total_variation(p: PiecewisePath) -> float:
    """Length in the coordinate-sum norm.

    Uses the l1 norm on increments so that the factorial-decay bound is
    compatible with the coefficient-sum norm on tensor levels.
    """
    return float(np.abs(p.increments()).sum())


def _time_key(t: PathTime) -> float:
    return t.segment + t.fraction


def concat(p: PiecewisePath, q: PiecewisePath, translate: bool = False) -> PiecewisePath:
    """Join two paths end to start.

    Unless ``translate`` is set, q must start where p ends (within
    1e-12); with the flag, q is shifted to match.
    """
    if p.dimension != q.dimension:
        raise ValueError("dimension mismatch")
    shift = p.end - q.start
    if not translate and np.linalg.norm(shift) > ENDPOINT_TOL:
        raise ValueError("endpoint mismatch; pass translate=True to shift the second path")
    verts = np.vstack([p.vertices, q.vertices[1:] + shift])
    return PiecewisePath(verts)


def reverse(p: PiecewisePath) -> PiecewisePath:
    return PiecewisePath(p.vertices[::-1], name=p.name)


def restrict(p: PiecewisePath, s: PathTime, t: PathTime) -> PiecewisePath:
    """Sub-path between two path times (s <= t in path order)."""
    if _time_key(s) > _time_key(t):
        raise ValueError("start time after end time")
    ps, pt = p.point_at(s), p.point_at(t)
    if s.segment == t.segment:
        return PiecewisePath([ps, pt])
    inner = p.vertices[s.segment + 1 : t.segment + 1]
    return PiecewisePath(np.vstack([[ps], inner, [pt]]))


def normalize(
    p: PiecewisePath, s: PathTime | None = None, t: PathTime | None = None
) -> PiecewisePath:
    """Rotate, translate and scale p|[s,t] to run from (0,0) to (1,0).

    Planar real paths only.  The chord from point s to point t becomes
    the unit x-segment; a degenerate chord is an error.
    """
    if not p.is_real_planar():
        raise ValueError("normalisation is defined for real planar paths")
    s = s if s is not None else p.path_start()
    t = t if t is not None else p.path_end()
    piece = restrict(p, s, t)
    chord = piece.end - piece.start
    length = float(np.linalg.norm(chord))
    if length == 0.0:
        raise ValueError("degenerate chord: endpoints coincide")
    u = chord / length
    rot = np.array([[u[0], u[1]], [-u[1], u[0]]])
    verts = (piece.vertices - piece.start) @ rot.T / length
    # the image endpoints are (0,0) and (1,0) up to rounding; snap them
    # so downstream hypotheses (x0=0, x1=1, y1=0) hold exactly
    if np.linalg.norm(verts[-1] - (1.0, 0.0)) > 1e-9:
        raise AssertionError("normalisation failed to land on (1, 0)")
    verts[0] = (0.0, 0.0)
    verts[-1] = (1.0, 0.0)
    return PiecewisePath(verts, name=p.name)


def tilde(p: PiecewisePath) -> PiecewisePath:
    """Close the path with the straight chord back to its start point.

    For a normalized path (endpoint (1,0)) the appended chord is the
    reversed unit x-segment.
    """
    if p.is_closed():
        return PiecewisePath(p.vertices, name=p.name)
    verts = np.vstack([p.vertices, [p.start]])
    return PiecewisePath(verts, name=p.name)


# -- builders -----------------------------------------------------------


def line(v: Sequence[complex]) -> PiecewisePath:
    """Straight segment from the origin to v."""
    v = np.asarray(v)
    return PiecewisePath([np.zeros_like(v), v], name="line")


def square_loop() -> PiecewisePath:
    """Unit square traversed counterclockwise from the origin."""
    return PiecewisePath(
        [(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0), (0.0, 0.0)], name="square"
    )


def figure_eight() -> PiecewisePath:
    """Two lobes, each traversed once forwards and once backwards.

    Line integrals of every one-form cancel loop against reversed
    loop, but second-order iterated integrals see the time ordering.
    Runs from (0,0) to (1,0) along the x-axis between the lobes.
    """
    b = (0.5, 0.0)
    d = (0.75, 0.25)
    e = (0.5, 0.25)
    f = (0.25, -0.25)
    g = (0.5, -0.25)
    verts = [
        (0.0, 0.0),
        b, d, e, b,       # upper lobe, forwards
        f, g, b,          # lower lobe, forwards
        e, d, b,          # upper lobe, backwards
        g, f, b,          # lower lobe, backwards
        (1.0, 0.0),
    ]
    return PiecewisePath(verts, name="figure8")


def brownian_sample(steps: int, seed: int, d: int = 2) -> PiecewisePath:
    """Piecewise-linear random walk with N(0, 1/steps) increments.

    A bounded-variation stand-in for Brownian motion; used only as a
    statistical fixture.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rng = np.random.default_rng(seed)
    inc = rng.standard_normal((steps, d)) / np.sqrt(steps)
    verts = np.vstack([np.zeros((1, d)), np.cumsum(inc, axis=0)])
    return PiecewisePath(verts, name=f"brownian-{seed}")


def conjugated_line(alpha: PiecewisePath | None) -> PiecewisePath:
    """alpha, then a unit x-step, then alpha reversed.

    With alpha empty this is the plain unit segment.  The result always
    runs from alpha's start with total increment (1, 0).
    """
    step = line([1.0, 0.0])
    if alpha is None or alpha.n_segments == 0:
        return step
    out = concat(alpha, step, translate=True)
    return concat(out, reverse(alpha), translate=True)
