"""Closed-form complex-exponential integrals along planar paths.

Everything here reduces to one primitive: on a straight segment the
coordinates are affine in the arclength fraction u, so integrands built
from exponentials of the first coordinate stay inside the class of
finite sums  c * u^p * exp(beta*u).  Iterated integrals over a simplex
are evaluated by propagating such sums through the path level by
level, which is exact up to floating-point error -- no quadrature.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from ._quad import line_integral
from .freelie import chen_strichartz_coeff
from .paths import PiecewisePath
from .tensor import GradedTensor, log_t, word_index

RateWord = tuple[complex, ...]

# rates closer than this are merged into one term
RATE_QUANTUM = 1e-12

# below this modulus the primitive of u^p e^{beta u} is expanded as a
# power series in beta; the closed form cancels catastrophically there
SERIES_RATE_CUTOFF = 4.0
_SERIES_EPS = 1e-20

# the closed-form primitive carries coefficients up to p!/|beta|^(p+1);
# beyond this amplification the series branch is used even for large
# rates (its own peak term is only about e^|beta|)
_CLOSED_FORM_AMPLIFICATION = 1e4

MAX_SM_ORDER = 6


def _rate_key(beta: complex) -> tuple[int, int]:
    return (round(beta.real / RATE_QUANTUM), round(beta.imag / RATE_QUANTUM))


class ExpPolynomial:
    """Finite sum of c * u^p * exp(beta*u) terms on one segment.

    Terms with equal power and nearly equal rate are merged; rates
    within :data:`RATE_QUANTUM` of zero collapse onto the polynomial
    part.
    """

    __slots__ = ("terms",)

    def __init__(self):
        # (power, rate key) -> [rate, coeff]
        self.terms: dict[tuple[int, tuple[int, int]], list[complex]] = {}

    @classmethod
    def constant(cls, c: complex) -> "ExpPolynomial":
        out = cls()
        if c != 0:
            out.terms[(0, (0, 0))] = [0.0 + 0.0j, complex(c)]
        return out

    def add_term(self, power: int, rate: complex, coeff: complex) -> None:
        if coeff == 0:
            return
        key = (power, _rate_key(rate))
        if key[1] == (0, 0):
            rate = 0.0 + 0.0j
        slot = self.terms.get(key)
        if slot is None:
            self.terms[key] = [complex(rate), complex(coeff)]
        else:
            slot[1] += coeff

    def scaled(self, c: complex) -> "ExpPolynomial":
        out = ExpPolynomial()
        if c != 0:
            for (p, _), (rate, coeff) in self.terms.items():
                out.add_term(p, rate, coeff * c)
        return out

    def rate_shifted(self, beta: complex) -> "ExpPolynomial":
        """Multiply by exp(beta * u)."""
        out = ExpPolynomial()
        for (p, _), (rate, coeff) in self.terms.items():
            out.add_term(p, rate + beta, coeff)
        return out

    def affine_power_multiplied(self, a0: complex, a1: complex, m: int) -> "ExpPolynomial":
        """Multiply by (a0 + a1*u)^m."""
        out = ExpPolynomial()
        for j in range(m + 1):
            factor = math.comb(m, j) * a0 ** (m - j) * a1**j
            if factor == 0:
                continue
            for (p, _), (rate, coeff) in self.terms.items():
                out.add_term(p + j, rate, coeff * factor)
        return out

    def antiderivative(self) -> "ExpPolynomial":
        """Primitive vanishing at u = 0.

        Branches per term to keep rounding amplification bounded: the
        polynomial rule for zero rates, a beta-power series (polynomial
        output) whenever the closed form would cancel catastrophically,
        and the exact closed form otherwise.
        """
        out = ExpPolynomial()
        for (p, _), (rate, coeff) in self.terms.items():
            if rate == 0:
                out.add_term(p + 1, 0.0, coeff / (p + 1))
                continue
            mod = abs(rate)
            use_series = (
                mod <= SERIES_RATE_CUTOFF
                or p > 150  # factorials overflow doubles beyond this
                or math.lgamma(p + 1) - (p + 1) * math.log(mod)
                > math.log(_CLOSED_FORM_AMPLIFICATION)
            )
            if use_series:
                # int_0^u t^p e^{bt} dt = sum_j b^j/j! * u^{p+j+1}/(p+j+1);
                # terms peak near j = |b| and then decay factorially
                factor = 1.0 + 0.0j
                peak = mod
                for j in range(1000):
                    out.add_term(p + j + 1, 0.0, coeff * factor / (p + j + 1))
                    factor *= rate / (j + 1)
                    if j > peak and abs(factor) < _SERIES_EPS:
                        break
            else:
                # e^{bu} * Q(u) - Q(0) with Q = sum_j (-1)^j p!/(p-j)! u^{p-j}/b^{j+1}
                fall = 1.0
                for j in range(p + 1):
                    out.add_term(p - j, rate, coeff * (-1) ** j * fall / rate ** (j + 1))
                    fall *= p - j
                out.add_term(0, 0.0, -coeff * (-1) ** p * math.factorial(p) / rate ** (p + 1))
        return out

    def plus_const(self, c: complex) -> "ExpPolynomial":
        out = ExpPolynomial()
        out.terms = {k: [v[0], v[1]] for k, v in self.terms.items()}
        out.add_term(0, 0.0, c)
        return out

    def __call__(self, u: float) -> complex:
        total = 0.0 + 0.0j
        for (p, _), (rate, coeff) in self.terms.items():
            total += coeff * u**p * cmath.exp(rate * u)
        return total

    def at_one(self) -> complex:
        total = 0.0 + 0.0j
        for (_, _), (rate, coeff) in self.terms.items():
            total += coeff * cmath.exp(rate)
        return total


def _segment_frames(p: PiecewisePath) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    if not p.is_real_planar():
        raise ValueError("exponential integrals need a real planar path")
    verts = p.vertices
    return verts[:-1, 0], np.diff(verts[:, 0]), np.diff(verts[:, 1])


def exp_line_integral(p: PiecewisePath, a: complex) -> complex:
    """Integral of e^{a x} dy, summed segmentwise in closed form."""
    x0, dx, dy = _segment_frames(p)
    z = a * dx
    phi = np.ones_like(z, dtype=np.complex128)
    big = np.abs(z) > 1e-8
    phi[big] = np.expm1(z[big]) / z[big]
    small = ~big & (np.abs(z) > 0)
    phi[small] = 1.0 + z[small] / 2.0 + z[small] ** 2 / 6.0
    return complex(np.sum(dy * np.exp(a * x0) * phi))


def iterated_integral(p: PiecewisePath, factors: Sequence[tuple[complex, int]]) -> complex:
    """Iterated simplex integral with per-level integrand e^{a x} x^m.

    ``factors`` lists (rate, power) pairs from the innermost time to
    the outermost; each level integrates the previous one against dy.
    """
    x0, dx, dy = _segment_frames(p)
    n_seg = len(dx)
    if n_seg == 0 or not factors:
        return 0.0 + 0.0j
    prev: list[ExpPolynomial] | None = None
    start = 0.0 + 0.0j
    for a, m in factors:
        a = complex(a)
        start = 0.0 + 0.0j
        cur: list[ExpPolynomial] = []
        for i in range(n_seg):
            g = prev[i] if prev is not None else ExpPolynomial.constant(1.0)
            g = g.scaled(dy[i] * cmath.exp(a * x0[i]))
            g = g.rate_shifted(a * dx[i])
            if m:
                g = g.affine_power_multiplied(x0[i], dx[i], m)
            f = g.antiderivative().plus_const(start)
            cur.append(f)
            start = f.at_one()
        prev = cur
    return start


def iterated_exp_integral(p: PiecewisePath, rates: Sequence[complex]) -> complex:
    """Integral over the ordered simplex of prod e^{a_i x_{t_i}} dy's."""
    return iterated_integral(p, [(a, 0) for a in rates])


def moment_integral(p: PiecewisePath, power: int) -> complex:
    """Single integral of x^power dy."""
    return iterated_integral(p, [(0.0, power)])


# -- the order-m log-signature functionals -------------------------------


def exp_increment_signature(p: PiecewisePath, rates: Sequence[complex], depth: int) -> GradedTensor:
    """Signature of the auxiliary path with increments e^{a_j x} dy.

    Level n coefficient of the word (j1..jn) is the iterated integral
    with rates (a_{j1}, ..., a_{jn}); all words share prefix work.
    """
    d = len(rates)
    x0, dx, dy = _segment_frames(p)
    n_seg = len(dx)
    sig = GradedTensor.unit(d, depth)
    if n_seg == 0:
        return sig
    prev: dict[tuple[int, ...], list[ExpPolynomial]] = {(): [ExpPolynomial.constant(1.0)] * n_seg}
    for level in range(1, depth + 1):
        cur: dict[tuple[int, ...], list[ExpPolynomial]] = {}
        for word, polys in prev.items():
            for j in range(d):
                a = complex(rates[j])
                start = 0.0 + 0.0j
                fs: list[ExpPolynomial] = []
                for i in range(n_seg):
                    g = polys[i].scaled(dy[i] * cmath.exp(a * x0[i]))
                    g = g.rate_shifted(a * dx[i])
                    f = g.antiderivative().plus_const(start)
                    fs.append(f)
                    start = f.at_one()
                new_word = word + (j,)
                cur[new_word] = fs
                sig.levels[level][word_index(new_word, d)] = start
        prev = cur
    return sig


def _bracket_word_coeffs(J: tuple[int, ...]) -> dict[tuple[int, ...], int]:
    """Word expansion of the right-nested bracket of the letters of J."""
    if len(J) == 1:
        return {J: 1}
    inner = _bracket_word_coeffs(J[1:])
    out: dict[tuple[int, ...], int] = {}
    head = J[:1]
    for w, c in inner.items():
        out[head + w] = out.get(head + w, 0) + c
        out[w + head] = out.get(w + head, 0) - c
    return out


def s_m_signature_route(p: PiecewisePath, rates: Sequence[complex]) -> complex:
    """S_m by assembling the auxiliary signature and taking its log.

    Tracks all m**m words of the auxiliary alphabet, so the cost climbs
    steeply with the order; the combinatorial route is far cheaper from
    order 5 on.
    """
    m = len(rates)
    _check_sm_order(m)
    sig = exp_increment_signature(p, rates, m)
    return log_t(sig).coeff(tuple(range(m)))


def s_m_combinatorial(
    p: PiecewisePath,
    rates: Sequence[complex],
    cache: dict[RateWord, complex] | None = None,
) -> complex:
    """S_m as a permutation combination of iterated exponential integrals.

    Expands the nested brackets of the descent-weighted bracket sum and
    pairs each surviving word with the iterated integral whose rates
    are permuted accordingly.
    """
    m = len(rates)
    _check_sm_order(m)
    rates = tuple(complex(a) for a in rates)
    if m == 1:
        return exp_line_integral(p, rates[0])
    if cache is None:
        cache = {}

    def iei(rate_word: RateWord) -> complex:
        val = cache.get(rate_word)
        if val is None:
            val = iterated_exp_integral(p, rate_word)
            cache[rate_word] = val
        return val

    target = tuple(range(m))
    total = 0.0 + 0.0j
    for J in itertools.permutations(range(m)):
        cj = _bracket_word_coeffs(J).get(target, 0)
        if cj == 0:
            continue
        for sigma in itertools.permutations(range(1, m + 1)):
            weight = chen_strichartz_coeff(sigma)
            inv = [0] * (m + 1)
            for pos, val in enumerate(sigma, start=1):
                inv[val] = pos
            rate_word = tuple(rates[J[inv[t] - 1]] for t in range(1, m + 1))
            total += weight * cj * iei(rate_word)
    return total


def s_m(
    p: PiecewisePath,
    rates: Sequence[complex],
    route: str = "combinatorial",
    cache: dict[RateWord, complex] | None = None,
) -> complex:
    """Log-signature coefficient functional of the rate word.

    The two routes are algebraically equal and numerically independent;
    ``combinatorial`` is the cheaper default.
    """
    if route == "combinatorial":
        return s_m_combinatorial(p, rates, cache=cache)
    if route == "signature":
        return s_m_signature_route(p, rates)
    raise ValueError(f"unknown route {route!r}")


def _check_sm_order(m: int) -> None:
    if not 1 <= m <= MAX_SM_ORDER:
        raise ValueError(f"order must be in 1..{MAX_SM_ORDER}, got {m}")


# -- second-order identity expressions ------------------------------------


def pq_double_integral(p: PiecewisePath, pk: int, qk: int) -> complex:
    """Double integral of e^{2 pi i (p x_s + q x_t)} dy_s dy_t over s < t."""
    return iterated_exp_integral(p, (2j * math.pi * pk, 2j * math.pi * qk))


def doubint_expression(p: PiecewisePath, k: int, b: complex) -> complex:
    """Two-parameter second-order identity expression.

    (1 - cosh b) * int_{s<t} (e^{2k pi i x_s + b(x_t - x_s)}
                              - e^{2k pi i x_t + b(x_s - x_t)}) dy dy
    + (sinh b) * int e^{b x} dy * int e^{(2k pi i - b) x} dy;
    vanishes identically at b = 0 and, for paths whose log-signature
    has infinite radius of convergence, for every b.
    """
    if k == 0:
        raise ValueError("k must be a nonzero integer")
    _require_normalized(p)
    b = complex(b)
    lam = 2j * math.pi * k
    phi = iterated_exp_integral(p, (lam - b, b)) - iterated_exp_integral(p, (b, lam - b))
    psi = exp_line_integral(p, b) * exp_line_integral(p, lam - b)
    return (1.0 - cmath.cosh(b)) * phi + cmath.sinh(b) * psi


def _require_normalized(p: PiecewisePath, tol: float = 1e-9) -> None:
    x0 = p.start[0]
    x1 = p.end[0]
    if abs(x0) > tol or abs(x1 - x0 - 1.0) > tol:
        raise ValueError("path must be normalized: x starts at 0 and ends at 1")


# -- smooth one-forms with finite Fourier content --------------------------


@dataclass
class FourierOneForm:
    """One-form f dx + g dy, 1-periodic in x with polynomial y-weights.

    ``f_modes`` and ``g_modes`` map the integer Fourier index k to the
    ascending coefficient list of a polynomial in y, representing
    poly(y) * exp(2 pi i k x).  The zero mode of f must be absent: its
    x-average over a period has to vanish.
    """

    f_modes: dict[int, Sequence[complex]] = field(default_factory=dict)
    g_modes: dict[int, Sequence[complex]] = field(default_factory=dict)
    label: str = ""

    MAX_POLY_DEGREE = 8

    def __post_init__(self):
        if 0 in self.f_modes and any(abs(complex(c)) > 0 for c in self.f_modes[0]):
            raise ValueError("the dx-coefficient must have zero x-average (no k=0 mode)")
        for modes in (self.f_modes, self.g_modes):
            for k, poly in modes.items():
                if len(poly) - 1 > self.MAX_POLY_DEGREE:
                    raise ValueError(f"y-polynomial degree exceeds {self.MAX_POLY_DEGREE}")

    def _eval(self, modes: dict[int, Sequence[complex]], xs: np.ndarray, ys: np.ndarray):
        total = np.zeros_like(xs, dtype=np.complex128)
        for k, poly in modes.items():
            weight = np.zeros_like(ys, dtype=np.complex128)
            for c in reversed(list(poly)):
                weight = weight * ys + c
            total += weight * np.exp(2j * np.pi * k * xs)
        return total

    def f(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self._eval(self.f_modes, xs, ys)

    def g(self, xs: np.ndarray, ys: np.ndarray) -> np.ndarray:
        return self._eval(self.g_modes, xs, ys)


def one_form_integral(p: PiecewisePath, form: FourierOneForm, tol: float = 1e-10) -> complex:
    """Line integral of the one-form along the path, by panel quadrature."""
    f = form.f if form.f_modes else None
    g = form.g if form.g_modes else None
    return line_integral(p, f, g, tol=tol)
