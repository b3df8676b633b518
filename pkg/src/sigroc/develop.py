"""Developments of tensor series into sl_{m+1}(C).

A development maps the two plane directions to matrices (a traceless
diagonal Cartan element and the superdiagonal nilpotent) and extends to
an algebra homomorphism on truncated tensor series.  The residual
checkers compare developed log-signature projections against the
closed-form exponential-integral functionals; each returns the value at
the requested truncation together with the step from two degrees lower
so callers can see the truncation tail.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import expint
from .paths import PiecewisePath, tilde
from .signatures import log_signature
from .tensor import GradedTensor, dm_project


@dataclass(frozen=True)
class DevelopmentMap:
    """Images of the two plane directions in (m+1)x(m+1) matrices."""

    image_e1: np.ndarray
    image_e2: np.ndarray

    def __post_init__(self):
        a = np.asarray(self.image_e1, dtype=np.complex128)
        d = np.asarray(self.image_e2, dtype=np.complex128)
        if a.shape != d.shape or a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("development images must be square matrices of equal size")
        object.__setattr__(self, "image_e1", a)
        object.__setattr__(self, "image_e2", d)

    @property
    def size(self) -> int:
        return self.image_e1.shape[0]


def cartan_element(rates: Sequence[complex]) -> np.ndarray:
    """Traceless diagonal A with A_kk - A_{k+1,k+1} = rates[k-1].

    Unique solution of the bracket conditions [A, E_{k,k+1}] =
    rates[k-1] E_{k,k+1} within the diagonal subalgebra.
    """
    rates = [complex(r) for r in rates]
    m = len(rates)
    if m < 1:
        raise ValueError("need at least one rate")
    tail = -sum((k + 1) * r for k, r in enumerate(rates)) / (m + 1)
    diag = np.empty(m + 1, dtype=np.complex128)
    diag[m] = tail
    for j in range(m - 1, -1, -1):
        diag[j] = diag[j + 1] + rates[j]
    return np.diag(diag)


def nilpotent_sum(m: int) -> np.ndarray:
    """Sum of the superdiagonal matrix units E_{k,k+1}, size m+1."""
    if m < 1:
        raise ValueError("m must be >= 1")
    return np.diag(np.ones(m, dtype=np.complex128), k=1)


def matrix_unit(i: int, j: int, size: int) -> np.ndarray:
    """E_{ij} with one-based indices."""
    out = np.zeros((size, size), dtype=np.complex128)
    out[i - 1, j - 1] = 1.0
    return out


def sl_development(rates: Sequence[complex]) -> DevelopmentMap:
    """Standard development for an m-rate word: Cartan + superdiagonal."""
    return DevelopmentMap(cartan_element(rates), nilpotent_sum(len(rates)))


def hat_f_degrees(x: GradedTensor, F: DevelopmentMap) -> list[np.ndarray]:
    """Per-degree images of a tensor series under the homomorphism.

    Degree n contributes sum_w coeff(w) * M(w) where M(w) is the product
    of the letter images along the word.  Words are processed in batches
    per level, keeping two levels of word-product arrays alive.
    """
    if x.d != 2:
        raise ValueError("developments are defined for two-letter series")
    size = F.size
    mats = (F.image_e1, F.image_e2)
    out: list[np.ndarray] = [x.levels[0][0] * np.eye(size, dtype=np.complex128)]
    prev = np.eye(size, dtype=np.complex128)[None, :, :]
    for n in range(1, x.depth + 1):
        cur = np.empty((2**n, size, size), dtype=np.complex128)
        for j in (0, 1):
            # words with first letter j occupy indices congruent to j mod 2
            cur[j::2] = mats[j] @ prev
        lv = x.levels[n]
        if lv.any():
            out.append(np.einsum("i,ijk->jk", lv, cur))
        else:
            out.append(np.zeros((size, size), dtype=np.complex128))
        prev = cur
    return out


def hat_f(x: GradedTensor, F: DevelopmentMap) -> np.ndarray:
    """Image of the truncated series under the algebra homomorphism."""
    return sum(hat_f_degrees(x, F))


def _partial_sums(degrees: list[np.ndarray]) -> list[np.ndarray]:
    sums = []
    acc = np.zeros_like(degrees[0])
    for d in degrees:
        acc = acc + d
        sums.append(acc)
    return sums


# -- identity residuals ----------------------------------------------------


def develop_2d_identity_profiles(
    p: PiecewisePath, lams: Sequence[complex], mu: complex, degrees: Sequence[int]
) -> dict[complex, dict[int, float]]:
    """Entire-function identity residuals at several truncations.

    Checks (e^lam - 1) * F(pi^N (L - x1 e1)) against
    lam*mu*(int e^{lam x} dy) * D on the two-dimensional development
    F(e1) = lam*diag(1/2,-1/2), F(e2) = mu*E_12.  The first-level pure
    first-letter term of L develops to the exact constant lam*A and sits
    outside the identity, so it is removed before developing.  The
    log-signature is computed once and shared across all lambdas.
    """
    expint._require_normalized(p)
    degrees = sorted(set(degrees))
    N = degrees[-1]
    mu = complex(mu)
    L = log_signature(p, N)
    L.levels[1][0] = 0.0  # drop the unit x-increment term
    A = np.diag([0.5 + 0j, -0.5 + 0j])
    D = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
    out: dict[complex, dict[int, float]] = {}
    for lam in lams:
        lam = complex(lam)
        F = DevelopmentMap(lam * A, mu * D)
        sums = _partial_sums(hat_f_degrees(L, F))
        target = lam * mu * expint.exp_line_integral(p, lam) * D
        out[lam] = {
            n: float(np.max(np.abs((cmath.exp(lam) - 1.0) * sums[n] - target))) for n in degrees
        }
    return out


def develop_2d_identity_residual(
    p: PiecewisePath, lam: complex, mu: complex, depth: int
) -> tuple[float, float]:
    """Residual at one truncation plus the change from two degrees lower."""
    prof = develop_2d_identity_profiles(p, [lam], mu, [depth - 2, depth])[complex(lam)]
    return prof[depth], abs(prof[depth] - prof[depth - 2])


def cn_coefficient_residual(p: PiecewisePath, lam: complex, mu: complex, depth: int) -> float:
    """Developed closed-path log-signature vs the moment polynomial.

    F(pi^N Ltilde) must equal mu * sum_{j<N} (int x^j/j! dy) lam^j
    times E_12; both sides are computed independently.
    """
    expint._require_normalized(p)
    lam, mu = complex(lam), complex(mu)
    Lt = log_signature(tilde(p), depth)
    A = np.diag([0.5 + 0j, -0.5 + 0j])
    D = np.array([[0.0, 1.0], [0.0, 0.0]], dtype=np.complex128)
    M = hat_f(Lt, DevelopmentMap(lam * A, mu * D))
    c = sum(
        expint.moment_integral(p, j) / math.factorial(j) * lam**j for j in range(depth)
    )
    return float(np.max(np.abs(M - mu * c * D)))


def fdk_residual(
    p: PiecewisePath, rates: Sequence[complex], k: int, depth: int
) -> tuple[float, float]:
    """Developed homogeneous projection vs the band of order-k functionals.

    The image of the k-th projection of the closed-path log-signature
    must converge to sum_j S_k(rates[j..j+k-1]) E_{j,j+k}.
    """
    expint._require_normalized(p)
    rates = [complex(r) for r in rates]
    m = len(rates)
    if not 1 <= k <= m:
        raise ValueError("need 1 <= k <= m")
    F = sl_development(rates)
    Lt = log_signature(tilde(p), depth)
    sums = _partial_sums(hat_f_degrees(dm_project(Lt, k), F))
    target = np.zeros((m + 1, m + 1), dtype=np.complex128)
    cache: dict = {}
    for j in range(1, m - k + 2):
        target += expint.s_m(p, rates[j - 1 : j + k - 1], cache=cache) * matrix_unit(
            j, j + k, m + 1
        )
    resid = float(np.max(np.abs(sums[depth] - target)))
    tail = float(np.max(np.abs(sums[depth] - sums[depth - 2])))
    return resid, tail


def dm_dev_coeff_residual(
    p: PiecewisePath, rates: Sequence[complex], word: Sequence[int], depth: int
) -> tuple[float, float]:
    """Corner entry of the developed top projection vs the S_m engine.

    ``word`` selects rates one-based; the development is built from the
    selected rates and the (1, m+1) entry of F(pi^N D_m Ltilde) is
    compared against S_m of the same rate word.
    """
    expint._require_normalized(p)
    rates = [complex(r) for r in rates]
    selected = [rates[i - 1] for i in word]
    m = len(selected)
    F = sl_development(selected)
    Lt = log_signature(tilde(p), depth)
    sums = _partial_sums(hat_f_degrees(dm_project(Lt, m), F))
    target = expint.s_m(p, selected)
    resid = abs(sums[depth][0, m] - target)
    tail = abs(sums[depth][0, m] - sums[depth - 2][0, m])
    return float(resid), float(tail)
