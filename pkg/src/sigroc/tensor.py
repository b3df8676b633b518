"""Dense truncated tensor-series arithmetic over a small alphabet.

A series is stored level by level: level ``n`` holds the ``d**n``
complex coefficients of all length-``n`` words over the alphabet
``{0, ..., d-1}``.  Word indexing is little-endian in the letters: the
first letter of a word is the least significant base-``d`` digit, so
the word ``(j1, j2, ..., jn)`` sits at index ``j1 + j2*d + ... +
jn*d**(n-1)``.  With this convention the index of a concatenation
``u.v`` is ``index(u) + index(v) * d**len(u)``.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import Iterable, Sequence

import numpy as np

MAX_ALPHABET = 8

# Memory guard: total coefficient count across all levels.  Generous
# enough for depth 20 on two letters and depth 6 on six letters.
MAX_TOTAL_COEFFS = 1 << 22

Word = tuple[int, ...]


def word_index(word: Sequence[int], d: int) -> int:
    """Index of a word, little-endian in the letters."""
    idx = 0
    for pos, letter in enumerate(word):
        if not 0 <= letter < d:
            raise ValueError(f"letter {letter} outside alphabet of size {d}")
        idx += letter * d**pos
    return idx


def index_word(index: int, length: int, d: int) -> Word:
    """Inverse of :func:`word_index` at a fixed word length."""
    letters = []
    for _ in range(length):
        letters.append(index % d)
        index //= d
    return tuple(letters)


def _total_coeffs(d: int, depth: int) -> int:
    return sum(d**n for n in range(depth + 1))


class GradedTensor:
    """Truncated formal tensor series with dense per-level storage.

    Instances are treated as immutable: all arithmetic returns new
    objects and never mutates the level arrays of its operands.
    """

    __slots__ = ("d", "depth", "levels")

    def __init__(self, d: int, depth: int, levels: list[np.ndarray] | None = None):
        if not 1 <= d <= MAX_ALPHABET:
            raise ValueError(f"alphabet size must be in 1..{MAX_ALPHABET}, got {d}")
        if depth < 0:
            raise ValueError("truncation depth must be >= 0")
        if _total_coeffs(d, depth) > MAX_TOTAL_COEFFS:
            raise ValueError(f"depth {depth} over alphabet {d} exceeds the coefficient budget")
        self.d = d
        self.depth = depth
        if levels is None:
            levels = [np.zeros(d**n, dtype=np.complex128) for n in range(depth + 1)]
        else:
            if len(levels) != depth + 1:
                raise ValueError("need one coefficient array per level 0..depth")
            levels = [np.asarray(lv, dtype=np.complex128) for lv in levels]
            for n, lv in enumerate(levels):
                if lv.shape != (d**n,):
                    raise ValueError(f"level {n} must have {d**n} entries, got {lv.shape}")
        self.levels = levels

    # -- constructors -------------------------------------------------

    @classmethod
    def zero(cls, d: int, depth: int) -> "GradedTensor":
        return cls(d, depth)

    @classmethod
    def unit(cls, d: int, depth: int) -> "GradedTensor":
        out = cls(d, depth)
        out.levels[0][0] = 1.0
        return out

    @classmethod
    def letter(cls, j: int, d: int, depth: int) -> "GradedTensor":
        return cls.from_word((j,), d, depth)

    @classmethod
    def from_word(cls, word: Sequence[int], d: int, depth: int, coeff: complex = 1.0) -> "GradedTensor":
        if len(word) > depth:
            raise ValueError("word longer than the truncation depth")
        out = cls(d, depth)
        out.levels[len(word)][word_index(word, d)] = coeff
        return out

    @classmethod
    def from_vector(cls, v: Sequence[complex], depth: int) -> "GradedTensor":
        """Embed a vector as a degree-one element."""
        v = np.asarray(v, dtype=np.complex128)
        out = cls(len(v), depth)
        if depth >= 1:
            out.levels[1][:] = v
        return out

    # -- bookkeeping ---------------------------------------------------

    def copy(self) -> "GradedTensor":
        return GradedTensor(self.d, self.depth, [lv.copy() for lv in self.levels])

    def truncated(self, depth: int) -> "GradedTensor":
        """Re-truncate, dropping or zero-padding levels as needed."""
        levels = [
            self.levels[n].copy() if n <= self.depth else np.zeros(self.d**n, dtype=np.complex128)
            for n in range(depth + 1)
        ]
        return GradedTensor(self.d, depth, levels)

    def coeff(self, word: Sequence[int]) -> complex:
        if len(word) > self.depth:
            return 0.0
        return complex(self.levels[len(word)][word_index(word, self.d)])

    def scalar(self) -> complex:
        return complex(self.levels[0][0])

    def words(self, n: int) -> Iterable[Word]:
        return itertools.product(range(self.d), repeat=n)

    def is_zero(self, tol: float = 0.0) -> bool:
        return all(np.max(np.abs(lv), initial=0.0) <= tol for lv in self.levels)

    def __repr__(self) -> str:  # pragma: no cover - debugging aid
        parts = []
        for n, lv in enumerate(self.levels):
            for idx in np.flatnonzero(np.abs(lv) > 1e-14)[:4]:
                parts.append(f"{lv[idx]:.4g}*w{index_word(int(idx), n, self.d)}")
        body = " + ".join(parts[:12]) or "0"
        return f"GradedTensor(d={self.d}, depth={self.depth}: {body})"

    # -- linear structure ----------------------------------------------

    def _check_compatible(self, other: "GradedTensor") -> None:
        if self.d != other.d or self.depth != other.depth:
            raise ValueError(
                f"shape mismatch: (d={self.d}, depth={self.depth}) vs "
                f"(d={other.d}, depth={other.depth})"
            )

    def __add__(self, other: "GradedTensor") -> "GradedTensor":
        self._check_compatible(other)
        return GradedTensor(self.d, self.depth, [a + b for a, b in zip(self.levels, other.levels)])

    def __sub__(self, other: "GradedTensor") -> "GradedTensor":
        self._check_compatible(other)
        return GradedTensor(self.d, self.depth, [a - b for a, b in zip(self.levels, other.levels)])

    def __neg__(self) -> "GradedTensor":
        return GradedTensor(self.d, self.depth, [-a for a in self.levels])

    def __mul__(self, scale: complex) -> "GradedTensor":
        return GradedTensor(self.d, self.depth, [a * scale for a in self.levels])

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(lv), initial=0.0)) for lv in self.levels)


def max_abs_diff(a: GradedTensor, b: GradedTensor) -> float:
    """Largest coefficientwise deviation between two series."""
    a._check_compatible(b)
    return (a - b).max_abs()


# -- multiplicative structure ------------------------------------------


def mul(a: GradedTensor, b: GradedTensor, max_level: int | None = None) -> GradedTensor:
    """Tensor product truncated at the common depth.

    ``max_level`` skips output levels above it (they are left zero);
    the series Horner loops use this to avoid computing levels that a
    later multiplication would push past the truncation anyway.
    """
    a._check_compatible(b)
    d, depth = a.d, a.depth
    top = depth if max_level is None else min(depth, max_level)
    nonzero_a = [bool(lv.any()) for lv in a.levels]
    nonzero_b = [bool(lv.any()) for lv in b.levels]
    out = GradedTensor(d, depth)
    for n in range(top + 1):
        acc = out.levels[n]
        for k in range(n + 1):
            if not (nonzero_a[k] and nonzero_b[n - k]):
                continue
            # left factor occupies the low digits of the joint index
            acc += np.multiply.outer(b.levels[n - k], a.levels[k]).ravel()
    return out


def bracket(a: GradedTensor, b: GradedTensor) -> GradedTensor:
    """Commutator [a, b] = a*b - b*a."""
    return mul(a, b) - mul(b, a)


def exp_t(x: GradedTensor) -> GradedTensor:
    """Truncated tensor exponential of a zero-scalar series."""
    if abs(x.scalar()) != 0.0:
        raise ValueError("exp_t needs a zero scalar component")
    one = GradedTensor.unit(x.d, x.depth)
    result = one
    for k in range(x.depth, 0, -1):
        # the iterate still passes through k-1 multiplications by x,
        # each raising the degree, so higher levels are dead weight
        result = one + mul(x, result, max_level=x.depth - k + 1) * (1.0 / k)
    return result


def log_t(x: GradedTensor) -> GradedTensor:
    """Truncated tensor logarithm of a unit-scalar series."""
    if abs(x.scalar() - 1.0) > 1e-12:
        raise ValueError("log_t needs scalar component 1")
    y = x - GradedTensor.unit(x.d, x.depth)
    y.levels[0][0] = 0.0  # discard rounding residue in the scalar slot
    depth = x.depth
    if depth == 0:
        return GradedTensor.zero(x.d, 0)
    acc = GradedTensor.unit(x.d, depth) * ((-1.0) ** (depth - 1) / depth)
    for k in range(depth - 1, 0, -1):
        acc = GradedTensor.unit(x.d, depth) * ((-1.0) ** (k - 1) / k) + mul(
            y, acc, max_level=depth - k
        )
    return mul(y, acc)


def inv(x: GradedTensor) -> GradedTensor:
    """Multiplicative inverse of a unit-scalar series."""
    if abs(x.scalar() - 1.0) > 1e-12:
        raise ValueError("inv needs scalar component 1")
    y = x - GradedTensor.unit(x.d, x.depth)
    y.levels[0][0] = 0.0
    one = GradedTensor.unit(x.d, x.depth)
    result = one
    for k in range(x.depth, 0, -1):
        result = one - mul(y, result, max_level=x.depth - k + 1)
    return result


# -- shuffles and group-likeness ---------------------------------------


def shuffle(u: Sequence, v: Sequence) -> Counter:
    """Multiset of order-preserving interleavings of two words.

    Letters may be any hashable objects; the result maps each
    interleaved word (tuple) to its multiplicity.  The total count is
    C(len(u)+len(v), len(u)).
    """
    u, v = tuple(u), tuple(v)
    m, n = len(u), len(v)
    out: Counter = Counter()
    for upos in itertools.combinations(range(m + n), m):
        w: list = [None] * (m + n)
        for letter, pos in zip(u, upos):
            w[pos] = letter
        it = iter(v)
        for pos in range(m + n):
            if w[pos] is None:
                w[pos] = next(it)
        out[tuple(w)] += 1
    return out


def _split_indices(s: int, subset: tuple[int, ...], d: int) -> tuple[np.ndarray, np.ndarray]:
    """For every length-s word index, the indices of its two subwords.

    ``subset`` lists the letter positions routed to the first subword;
    the remaining positions, in order, form the second.
    """
    idx = np.arange(d**s, dtype=np.int64)
    iu = np.zeros_like(idx)
    iv = np.zeros_like(idx)
    in_subset = [False] * s
    for pos in subset:
        in_subset[pos] = True
    pu = pv = 1
    for pos in range(s):
        digit = (idx // d**pos) % d
        if in_subset[pos]:
            iu += digit * pu
            pu *= d
        else:
            iv += digit * pv
            pv *= d
    return iu, iv


def is_group_like(x: GradedTensor, tol: float = 1e-10) -> tuple[bool, float]:
    """Check the shuffle relations <x,u><x,v> = <x, u sh v>.

    Runs over all word pairs with |u|+|v| <= depth and returns the
    worst residual along with the verdict.
    """
    if abs(x.scalar() - 1.0) > 1e-9:
        raise ValueError("group-likeness is defined for unit-scalar series")
    d, depth = x.d, x.depth
    worst = 0.0
    for s in range(2, depth + 1):
        for n1 in range(1, s):
            lhs = np.multiply.outer(x.levels[n1], x.levels[s - n1])
            rhs = np.zeros_like(lhs)
            flat = rhs.reshape(-1)
            for subset in itertools.combinations(range(s), n1):
                iu, iv = _split_indices(s, subset, d)
                np.add.at(flat, iu * d ** (s - n1) + iv, x.levels[s])
            worst = max(worst, float(np.max(np.abs(lhs - rhs))))
    return worst <= tol, worst


# -- projections and norms ----------------------------------------------


def _second_letter_counts(n: int) -> np.ndarray:
    """Number of occurrences of letter 1 in every length-n binary word."""
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint64)).astype(np.int64)


def dm_project(x: GradedTensor, m: int) -> GradedTensor:
    """Keep exactly the words containing m copies of the second letter."""
    if x.d != 2:
        raise ValueError("the homogeneous projection is defined on two letters")
    if m < 0:
        raise ValueError("m must be >= 0")
    out = GradedTensor(2, x.depth)
    for n in range(x.depth + 1):
        mask = _second_letter_counts(n) == m
        out.levels[n][mask] = x.levels[n][mask]
    return out


def level_norm(x: GradedTensor, n: int) -> float:
    """Sum of coefficient moduli at one level (admissible norm proxy)."""
    if not 0 <= n <= x.depth:
        raise ValueError(f"level {n} outside 0..{x.depth}")
    return float(np.abs(x.levels[n]).sum())
