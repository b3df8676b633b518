"""Signatures and log-signatures of piecewise-linear paths.

The signature is assembled as the product of per-segment exponentials;
the log-signature is its truncated tensor logarithm.  The module also
provides the adjoint-representation cross-check (a second, closed-form
route to the same signature) and a growth profile of log-signature
levels used to classify radius-of-convergence behaviour.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import expint
from .paths import PathTime, PiecewisePath, restrict
from .tensor import GradedTensor, bracket, level_norm, log_t, mul


def segment_exponential(v: np.ndarray, depth: int) -> GradedTensor:
    """exp of a degree-one element: level n is v^(x)n / n!."""
    d = len(v)
    out = GradedTensor.unit(d, depth)
    lvl = np.ones(1, dtype=np.complex128)
    for n in range(1, depth + 1):
        # appending a letter adds the top base-d digit of the index
        lvl = np.multiply.outer(np.asarray(v, dtype=np.complex128), lvl).ravel() / n
        out.levels[n] = lvl
    return out


def signature(p: PiecewisePath, depth: int) -> GradedTensor:
    """Signature of the path, truncated at the given depth."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    out = GradedTensor.unit(p.dimension, depth)
    for v in p.increments():
        out = mul(out, segment_exponential(v, depth))
    return out


def signature_interval(p: PiecewisePath, s: PathTime, t: PathTime, depth: int) -> GradedTensor:
    """Signature of the sub-path between two path times."""
    if (s.segment, s.fraction) == (t.segment, t.fraction):
        return GradedTensor.unit(p.dimension, depth)
    return signature(restrict(p, s, t), depth)


def log_signature(p: PiecewisePath, depth: int) -> GradedTensor:
    return log_t(signature(p, depth))


# -- adjoint-representation cross-check ----------------------------------


def _ad_power_e2(m: int, depth: int) -> GradedTensor:
    """ad_{e1}^m(e2) expanded in the word basis (two letters)."""
    out = GradedTensor.letter(1, 2, depth)
    e1 = GradedTensor.letter(0, 2, depth)
    for _ in range(m):
        out = bracket(e1, out)
    return out


def verify_adjoint_rep(p: PiecewisePath, depth: int) -> float:
    """Deviation between the signature and its adjoint reconstruction.

    Route A is the per-segment exponential product.  Route B expands
    each integrand factor as a power series in the first coordinate,
    evaluates every iterated moment integral in closed form, assembles
    the corresponding tensor words, and multiplies by exp(e1).  The
    path must be normalized so that its first-coordinate increment
    is one.
    """
    if not p.is_real_planar():
        raise ValueError("the adjoint cross-check needs a real planar path")
    x_inc = p.end[0] - p.start[0]
    if abs(x_inc - 1.0) > 1e-9:
        raise ValueError("path must be normalized (unit x-increment)")

    route_a = signature(p, depth)

    ad_pows = [_ad_power_e2(m, depth) for m in range(depth)]
    series = GradedTensor.unit(2, depth)

    def compositions(budget: int, prefix: tuple[int, ...]):
        # sequences (m_1..m_k) with sum (m_i + 1) <= depth
        yield prefix
        if budget >= 1:
            for m in range(budget):
                yield from compositions(budget - m - 1, prefix + (m,))

    for combo in compositions(depth, ()):
        if not combo:
            continue
        factors = [(0.0, m) for m in combo]
        moment = expint.iterated_integral(p, factors)
        piece = ad_pows[combo[0]] * (moment / math.factorial(combo[0]))
        for m in combo[1:]:
            piece = mul(piece, ad_pows[m] * (1.0 / math.factorial(m)))
        series = series + piece

    route_b = mul(series, segment_exponential(np.array([1.0, 0.0]), depth))
    return (route_a - route_b).max_abs()


# -- radius-of-convergence profiling --------------------------------------

DEGENERATE_CUTOFF = 1e-14
RHO_MIN = 1.05


@dataclass
class RocProfile:
    """Per-degree growth data for a zero-scalar series.

    ``norms[n-1]`` is the coefficient-sum norm of degree n and ``r``
    its n-th root.  The verdict is a heuristic consistency class, not
    a proof: the finite truncation cannot resolve the true limsup.
    """

    norms: list[float]
    r: list[float]
    slope: float | None
    window: tuple[int, int]
    verdict: str


def roc_profile(L: GradedTensor) -> RocProfile:
    """Classify tail growth of a log-signature-like series.

    degenerate-tail: everything beyond degree 2 is numerically zero;
    finite-consistent: the log-norm tail slope is >= log(RHO_MIN);
    infinite-consistent: otherwise.
    """
    if abs(L.scalar()) > 1e-12:
        raise ValueError("profile needs a zero-scalar series")
    N = L.depth
    if N < 6:
        raise ValueError("need at least 6 degrees to profile a tail")
    norms = [level_norm(L, n) for n in range(1, N + 1)]
    r = [norms[n - 1] ** (1.0 / n) for n in range(1, N + 1)]

    if all(norms[n - 1] <= DEGENERATE_CUTOFF for n in range(3, N + 1)):
        return RocProfile(norms, r, None, (0, 0), "degenerate-tail")

    lo = math.ceil(N / 2)
    xs = [n for n in range(lo, N + 1) if norms[n - 1] > DEGENERATE_CUTOFF]
    if len(xs) < 3:
        return RocProfile(norms, r, None, (lo, N), "degenerate-tail")
    ys = [math.log(norms[n - 1]) for n in xs]
    slope = float(np.polyfit(xs, ys, 1)[0])
    verdict = "finite-consistent" if slope >= math.log(RHO_MIN) else "infinite-consistent"
    return RocProfile(norms, r, slope, (lo, N), verdict)
