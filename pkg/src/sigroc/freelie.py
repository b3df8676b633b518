"""Free Lie algebra machinery on top of the dense tensor arithmetic.

Covers Bernoulli numbers, the BCH product, the graded Hausdorff series
(both the two-letter version and the vector version over opaque
symbols), symmetrized derivation products, nested-bracket expansions,
descent-normalised permutation coefficients, the consecutive-sum
shuffle identity, and the Dynkin criterion for Lie elements.
"""

from __future__ import annotations

import itertools
import math
from fractions import Fraction
from typing import Sequence

import numpy as np

from .tensor import GradedTensor, bracket, exp_t, index_word, log_t, mul, word_index

# -- Bernoulli numbers ---------------------------------------------------

_BERNOULLI: list[Fraction] = [Fraction(1)]


def _extend_bernoulli(m: int) -> None:
    # recurrence sum_{j<=m} C(m+1, j) B_j = 0, exact in rationals
    while len(_BERNOULLI) <= m:
        k = len(_BERNOULLI)
        acc = Fraction(0)
        for j, bj in enumerate(_BERNOULLI):
            acc += math.comb(k + 1, j) * bj
        _BERNOULLI.append(-acc / (k + 1))


def bernoulli(m: int) -> float:
    """m-th Bernoulli number of z/(e^z - 1), so B1 = -1/2."""
    if m < 0:
        raise ValueError("Bernoulli index must be >= 0")
    _extend_bernoulli(m)
    return float(_BERNOULLI[m])


# -- BCH and Hausdorff series -------------------------------------------


def ad(w: GradedTensor, v: GradedTensor) -> GradedTensor:
    """Adjoint action ad_w(v) = [w, v]."""
    return bracket(w, v)


def bch(v: GradedTensor, w: GradedTensor) -> GradedTensor:
    """log(exp(v) exp(w)) at the common truncation depth."""
    return log_t(mul(exp_t(v), exp_t(w)))


def hausdorff_h1(v: GradedTensor, w_letter: int, depth: int | None = None) -> GradedTensor:
    """First Hausdorff series sum_m B_m/m! ad_w^m(v) for a letter w."""
    if depth is not None and depth != v.depth:
        v = v.truncated(depth)
    if abs(v.scalar()) != 0.0:
        raise ValueError("needs a zero scalar component")
    w = GradedTensor.letter(w_letter, v.d, v.depth)
    term = v
    out = GradedTensor.zero(v.d, v.depth)
    m = 0
    while not term.is_zero():
        out = out + term * (bernoulli(m) / math.factorial(m))
        term = ad(w, term)
        m += 1
        if m > v.depth + 1:
            break
    return out


def derivation(target: GradedTensor, letter: int, replacement: GradedTensor) -> GradedTensor:
    """Leibniz derivation sending one letter to a series.

    Every occurrence of ``letter`` in every word of ``target`` is
    replaced by ``replacement`` (one occurrence at a time, summed); all
    other letters are left alone.
    """
    target._check_compatible(replacement)
    if abs(replacement.scalar()) != 0.0:
        raise ValueError("replacement needs a zero scalar component")
    d, depth = target.d, target.depth
    out = GradedTensor.zero(d, depth)
    rep_levels = [
        (k, replacement.levels[k]) for k in range(1, depth + 1) if replacement.levels[k].any()
    ]
    for n in range(1, depth + 1):
        lv = target.levels[n]
        for idx in np.flatnonzero(lv):
            c = lv[idx]
            word = index_word(int(idx), n, d)
            for pos in range(n):
                if word[pos] != letter:
                    continue
                # joint index = prefix + rep*d^pos + suffix*d^(pos+k)
                prefix = word_index(word[:pos], d)
                suffix = word[pos + 1 :]
                for k, rep in rep_levels:
                    if n - 1 + k > depth:
                        continue
                    dest = out.levels[n - 1 + k]
                    base = prefix + word_index(suffix, d) * d ** (pos + k)
                    stride = d**pos
                    for ridx in np.flatnonzero(rep):
                        dest[base + int(ridx) * stride] += c * rep[ridx]
    return out


def hausdorff_hn(n: int, v: GradedTensor, w_letter: int, depth: int | None = None) -> GradedTensor:
    """n-th Hausdorff series (1/n!) (H1(v,w) d/dw)^n (w).

    The derivation acts on every occurrence of the letter ``w``,
    including those introduced by earlier substitutions, and on nothing
    else; the partial degree of ``v`` in the result is ``n``.  The
    n = 0 term is the bare letter ``w``, so summing over n >= 0
    reproduces the full BCH series of (v, w).
    """
    if n < 0:
        raise ValueError("n must be >= 0")
    if depth is not None and depth != v.depth:
        v = v.truncated(depth)
    h1 = hausdorff_h1(v, w_letter)
    g = GradedTensor.letter(w_letter, v.d, v.depth)
    for _ in range(n):
        g = derivation(g, w_letter, h1)
    return g * (1.0 / math.factorial(n))


# -- vector Hausdorff series over opaque symbols ------------------------
#
# The alphabet is {0: active letter, 1..n: opaque symbols X_i}.  The
# symbol X_i carries degree one for truncation purposes and is never
# differentiated; the derivations below act on letter 0 only, which the
# generic `derivation` already guarantees.


def _h1_opaque(k_index: int, n_symbols: int, depth: int) -> GradedTensor:
    """H1 of the opaque symbol X_{k_index} against the active letter."""
    d = n_symbols + 1
    x = GradedTensor.letter(k_index, d, depth)
    return hausdorff_h1(x, 0)


def hn_vector_direct(K: Sequence[int], depth: int) -> GradedTensor:
    """Nested-derivation form of the vector Hausdorff series H_K.

    ``K = (k_1, ..., k_n)`` only fixes how many opaque symbols appear;
    the result is a series over the alphabet {e1, X_1, ..., X_n}.
    """
    n = len(K)
    if n < 1 or any(k < 1 for k in K):
        raise ValueError("K must be a nonempty vector of positive integers")
    d = n + 1
    g = GradedTensor.letter(0, d, depth)
    for i in range(n, 0, -1):
        g = derivation(g, 0, _h1_opaque(i, n, depth))
    return g * (1.0 / math.factorial(n))


def ordered_replacements(
    target: GradedTensor, letter: int, replacements: Sequence[GradedTensor]
) -> GradedTensor:
    """Replace r occurrences of a letter by (A_1, ..., A_r) in order.

    Sums over all increasing r-tuples of positions of ``letter``; the
    j-th chosen position receives A_j.  Monomials with fewer than r
    occurrences contribute zero.
    """
    r = len(replacements)
    if r == 0:
        return target.copy()
    d, depth = target.d, target.depth
    out = GradedTensor.zero(d, depth)
    for n in range(r, depth + 1):
        lv = target.levels[n]
        for idx in np.flatnonzero(lv):
            c = lv[idx]
            word = index_word(int(idx), n, d)
            positions = [p for p in range(n) if word[p] == letter]
            if len(positions) < r:
                continue
            for chosen in itertools.combinations(positions, r):
                _splice(out, word, chosen, replacements, c)
    return out


def _splice(
    out: GradedTensor,
    word: tuple[int, ...],
    positions: tuple[int, ...],
    reps: Sequence[GradedTensor],
    coeff: complex,
) -> None:
    """Accumulate word with the given positions replaced by series."""
    d, depth = out.d, out.depth
    pieces: list[tuple[int, ...] | GradedTensor] = []
    prev = 0
    for pos, rep in zip(positions, reps):
        pieces.append(word[prev:pos])
        pieces.append(rep)
        prev = pos + 1
    pieces.append(word[prev:])

    # (index, length, coefficient) partial products, left to right
    partial: list[tuple[int, int, complex]] = [(0, 0, coeff)]
    for piece in pieces:
        if isinstance(piece, tuple):
            if not piece:
                continue
            pidx = word_index(piece, d)
            plen = len(piece)
            partial = [
                (idx + pidx * d**length, length + plen, c)
                for idx, length, c in partial
                if length + plen <= depth
            ]
        else:
            new: list[tuple[int, int, complex]] = []
            for k in range(1, depth + 1):
                rep = piece.levels[k]
                if not rep.any():
                    continue
                for ridx in np.flatnonzero(rep):
                    rcoeff = rep[ridx]
                    for idx, length, c in partial:
                        if length + k <= depth:
                            new.append((idx + int(ridx) * d**length, length + k, c * rcoeff))
            partial = new
        if not partial:
            return
    for idx, length, c in partial:
        out.levels[length][idx] += c


def symmetrized_derivation_product(
    replacements: Sequence[GradedTensor], target: GradedTensor, letter: int = 0
) -> GradedTensor:
    """Symmetrized multi-derivation: sum over all injective placements.

    Equals the sum over permutations of :func:`ordered_replacements`;
    replaced material is never differentiated again.
    """
    out = GradedTensor.zero(target.d, target.depth)
    for perm in itertools.permutations(replacements):
        out = out + ordered_replacements(target, letter, perm)
    return out


def _set_partitions(items: Sequence[int]):
    """All unordered partitions of a sequence into nonempty blocks."""
    items = list(items)
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        yield [[first]] + [list(b) for b in part]
        for i in range(len(part)):
            yield [list(b) for b in part[:i]] + [[first] + list(part[i])] + [
                list(b) for b in part[i + 1 :]
            ]


def hn_vector_recursive(K: Sequence[int], depth: int) -> GradedTensor:
    """Partition recursion for H_K.

    H_n(k_1..k_n) = sum over unordered partitions P of {1..n-1} of
    (l_1! ... l_r!/n!) times the symmetrized derivation product of the
    block series H_{K_p} applied to H1(k_n).
    """
    n = len(K)
    if n < 1 or any(k < 1 for k in K):
        raise ValueError("K must be a nonempty vector of positive integers")
    d = n + 1
    base = _h1_opaque(n, n, depth)
    if n == 1:
        return base
    out = GradedTensor.zero(d, depth)
    for part in _set_partitions(range(1, n)):
        blocks = []
        weight = 1.0
        for block in part:
            weight *= math.factorial(len(block))
            # H of the sub-vector, re-expressed over the full alphabet:
            # block symbols keep their identity, so embed the |block|+1
            # letter computation by renaming its symbols.
            sub = hn_vector_direct([K[i - 1] for i in block], depth)
            blocks.append(_rename_symbols(sub, block, d))
        term = symmetrized_derivation_product(blocks, base, letter=0)
        out = out + term * (weight / math.factorial(n))
    return out


def _rename_symbols(x: GradedTensor, block: Sequence[int], d_out: int) -> GradedTensor:
    """Map a series over {e1, X_1..X_r} into a bigger opaque alphabet.

    The j-th local symbol becomes global symbol ``block[j]``; the
    active letter stays letter 0.
    """
    mapping = {0: 0}
    for j, sym in enumerate(block, start=1):
        mapping[j] = sym
    out = GradedTensor.zero(d_out, x.depth)
    for n in range(x.depth + 1):
        lv = x.levels[n]
        for idx in np.flatnonzero(lv):
            word = index_word(int(idx), n, x.d)
            new = tuple(mapping[letter] for letter in word)
            out.levels[n][word_index(new, d_out)] += lv[idx]
    return out


def hn_vector(K: Sequence[int], depth: int, method: str = "direct") -> GradedTensor:
    if method == "direct":
        return hn_vector_direct(K, depth)
    if method == "recursive":
        return hn_vector_recursive(K, depth)
    raise ValueError(f"unknown method {method!r}")


# -- nested brackets ------------------------------------------------------


def right_nested_bracket(J: Sequence[int], d: int) -> GradedTensor:
    """[e_{j1}, [e_{j2}, ... [e_{j_{m-1}}, e_{j_m}]]] as a tensor."""
    if len(J) < 1:
        raise ValueError("need at least one letter")
    depth = len(J)
    out = GradedTensor.letter(J[-1], d, depth)
    for j in reversed(J[:-1]):
        out = bracket(GradedTensor.letter(j, d, depth), out)
    return out


def liemon_expand(J: Sequence[int], d: int) -> GradedTensor:
    """Subset expansion of the right-nested bracket.

    Sums (-1)^|K| e_{J minus (J_K, last two)} (x) [e_{j_{m-1}}, e_{j_m}]
    (x) e_{reversed J_K} over subsets K of the first m-2 positions.
    """
    J = tuple(J)
    m = len(J)
    if m < 2:
        raise ValueError("need a word of length >= 2")
    out = GradedTensor.zero(d, m)
    a, b = J[m - 2], J[m - 1]
    for r in range(m - 1):
        for K in itertools.combinations(range(m - 2), r):
            kept = tuple(J[i] for i in range(m - 2) if i not in K)
            rev = tuple(J[i] for i in reversed(K))
            sign = (-1) ** r
            for pair, s in (((a, b), 1), ((b, a), -1)):
                word = kept + pair + rev
                out.levels[m][word_index(word, d)] += sign * s
    return out


# -- descent coefficients and the consecutive-sum identity ---------------


def descent_count(sigma: Sequence[int]) -> int:
    """Number of positions j with sigma(j) > sigma(j+1) (1-based images)."""
    return sum(1 for a, b in zip(sigma, sigma[1:]) if a > b)


def chen_strichartz_coeff(sigma: Sequence[int]) -> float:
    """Bracket-form permutation weight (-1)^e / (m^2 C(m-1, e))."""
    m = len(sigma)
    if sorted(sigma) != list(range(1, m + 1)):
        raise ValueError("expected a permutation of 1..m")
    e = descent_count(sigma)
    return (-1.0) ** e / (m * m * math.comb(m - 1, e))


def log_word_coeff(sigma: Sequence[int]) -> float:
    """Word-form permutation weight (-1)^e / (m C(m-1, e)).

    This is the weight attached to permuted words (rather than nested
    brackets) when reading a single logarithm coefficient.
    """
    m = len(sigma)
    e = descent_count(sigma)
    return (-1.0) ** e / (m * math.comb(m - 1, e))


def consecutive_shuffle_sum(c: Sequence[complex], s: int) -> complex:
    """Left-hand side of the consecutive-sum identity, by enumeration.

    ``c`` has R+1 entries and 0 <= s <= R.  Enumerates the permutations
    eta of S_{R+1} with eta(s+1)=1, eta(s)<...<eta(1) and
    eta(s+2)<...<eta(R+1), and sums the reciprocal products of partial
    sums of c along eta^{-1}(2..k).
    """
    c = [complex(z) for z in c]
    R = len(c) - 1
    if not 0 <= s <= R:
        raise ValueError("need 0 <= s <= R")
    total = 0.0 + 0.0j
    values = list(range(2, R + 2))
    for left_set in itertools.combinations(values, s):
        left = sorted(left_set, reverse=True)  # positions 1..s, decreasing
        right = sorted(set(values) - set(left_set))  # positions s+2..R+1
        eta = left + [1] + right  # eta[pos-1] = value at position pos
        pos_of = {val: pos + 1 for pos, val in enumerate(eta)}
        prod = 1.0 + 0.0j
        partial = 0.0 + 0.0j
        for val in range(2, R + 2):
            partial += c[pos_of[val] - 1]
            if partial == 0:
                raise ZeroDivisionError("zero consecutive sum in a denominator")
            prod *= partial
        total += 1.0 / prod
    return total


def consecutive_shuffle_closed_form(c: Sequence[complex], s: int) -> complex:
    """Right-hand side of the consecutive-sum identity."""
    c = [complex(z) for z in c]
    R = len(c) - 1
    if not 0 <= s <= R:
        raise ValueError("need 0 <= s <= R")

    def block(p: int, q: int) -> complex:  # sum c_p..c_q, 1-based
        return sum(c[p - 1 : q], 0.0 + 0.0j)

    prod = 1.0 + 0.0j
    for k in range(1, s + 1):
        prod *= block(k, s)
    for k in range(s + 2, R + 2):
        prod *= block(s + 2, k)
    if prod == 0:
        raise ZeroDivisionError("zero consecutive sum in a denominator")
    return 1.0 / prod


# -- Dynkin criterion ------------------------------------------------------


def _right_bracketing(level: np.ndarray, n: int, d: int) -> np.ndarray:
    """Apply word -> right-nested bracket linearly to one level."""
    if n <= 1:
        return level.copy()
    out = np.zeros_like(level)
    block = level.reshape(d ** (n - 1), d)  # [rest, first letter]
    for j in range(d):
        inner = _right_bracketing(block[:, j].copy(), n - 1, d)
        # e_j (x) inner: first letter j, low digit
        out[j::d] += inner
        # inner (x) e_j: letter j appended as the top digit
        out[j * d ** (n - 1) : (j + 1) * d ** (n - 1)] -= inner
    return out


def dynkin_is_lie(x: GradedTensor, tol: float = 1e-10) -> tuple[bool, float]:
    """Dynkin test: degree-n part is Lie iff bracketing it returns n times it."""
    if abs(x.scalar()) != 0.0:
        raise ValueError("Lie series have zero scalar component")
    worst = 0.0
    for n in range(1, x.depth + 1):
        lv = x.levels[n]
        if not lv.any():
            continue
        image = _right_bracketing(lv, n, x.d)
        worst = max(worst, float(np.max(np.abs(image - n * lv))))
    return worst <= tol, worst
