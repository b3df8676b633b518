import itertools
import math

import numpy as np
import pytest

from sigroc import freelie as F
from sigroc.tensor import GradedTensor, bracket, max_abs_diff, mul

from conftest import random_path


def letter(j, d=2, depth=6):
    return GradedTensor.letter(j, d, depth)


class TestBernoulli:
    def test_first_values(self):
        assert F.bernoulli(0) == 1
        assert F.bernoulli(1) == -0.5
        assert F.bernoulli(2) == pytest.approx(1 / 6)
        assert F.bernoulli(3) == 0

    def test_odd_vanish(self):
        assert all(F.bernoulli(2 * m + 1) == 0 for m in range(1, 15))

    def test_generating_function(self):
        # sum B_m/m! z^m must reproduce z/(e^z - 1)
        for z in (0.5, -0.8, 0.3 + 0.4j):
            total = sum(F.bernoulli(m) / math.factorial(m) * z**m for m in range(40))
            assert total == pytest.approx(z / (np.exp(z) - 1), abs=1e-13)

    def test_negative_index(self):
        with pytest.raises(ValueError):
            F.bernoulli(-1)


class TestBch:
    def test_bch_with_zero(self):
        v = GradedTensor.from_vector([1.0, 2.0], 5)
        assert max_abs_diff(F.bch(v, GradedTensor.zero(2, 5)), v) <= 1e-13

    def test_printed_low_degrees(self):
        e1, e2 = letter(0, 2, 3), letter(1, 2, 3)
        b = F.bch(e1, e2)
        br = bracket(e1, e2)
        deg2 = GradedTensor(2, 3, [0 * b.levels[0], 0 * b.levels[1], b.levels[2], 0 * b.levels[3]])
        assert max_abs_diff(deg2, 0.5 * br) <= 1e-15
        deg3 = GradedTensor(2, 3, [0 * b.levels[0], 0 * b.levels[1], 0 * b.levels[2], b.levels[3]])
        expected = (1 / 12) * bracket(e1, br) - (1 / 12) * bracket(e2, br)
        assert max_abs_diff(deg3, expected) <= 1e-15


class TestHausdorff:
    def test_h1_low_degrees(self):
        e1, e2 = letter(0, 2, 4), letter(1, 2, 4)
        h1 = F.hausdorff_h1(e1, 1)
        expected = (
            e1
            - 0.5 * bracket(e2, e1)
            + (1 / 12) * bracket(e2, bracket(e2, e1))
        )
        for n in range(4):  # the depth-4 slot holds only the B4 term
            assert np.max(np.abs(h1.levels[n] - expected.levels[n])) <= 1e-15

    def test_h1_of_zero(self):
        assert F.hausdorff_h1(GradedTensor.zero(2, 4), 1).is_zero()

    def test_hn_base_case(self):
        e1 = letter(0, 2, 5)
        assert max_abs_diff(F.hausdorff_hn(1, e1, 1), F.hausdorff_h1(e1, 1)) <= 1e-15

    def test_h2_degree_grading(self):
        # every word of H2(e1, e2) carries exactly two e1 letters
        e1 = letter(0, 2, 6)
        h2 = F.hausdorff_hn(2, e1, 1)
        for n in range(7):
            for idx in np.flatnonzero(np.abs(h2.levels[n]) > 1e-14):
                word = tuple((int(idx) // 2**k) % 2 for k in range(n))
                assert word.count(0) == 2

    def test_sum_equals_bch(self):
        e1, e2 = letter(0, 2, 8), letter(1, 2, 8)
        total = GradedTensor.zero(2, 8)
        for n in range(0, 9):
            total = total + F.hausdorff_hn(n, e1, 1)
        assert max_abs_diff(total, F.bch(e1, e2)) <= 1e-10


class TestHnVector:
    @pytest.mark.parametrize("K", [(1,), (2,), (3,), (1, 1), (1, 2), (2, 1), (1, 1, 1)])
    def test_recursion_equals_direct(self, K):
        a = F.hn_vector(K, 5, method="direct")
        b = F.hn_vector(K, 5, method="recursive")
        assert max_abs_diff(a, b) <= 1e-12

    @pytest.mark.parametrize("K", [(2, 2), (1, 3), (1, 1, 2), (2, 1, 1), (1, 2, 1)])
    def test_recursion_equals_direct_degree_four(self, K):
        a = F.hn_vector(K, 6, method="direct")
        b = F.hn_vector(K, 6, method="recursive")
        assert max_abs_diff(a, b) <= 1e-12

    def test_base_case_formula(self):
        # H1(k) = sum B_l/l! ad_{e1}^l(X1)
        got = F.hn_vector((2,), 5)
        d = 2  # alphabet {e1, X1}
        e1, x1 = GradedTensor.letter(0, d, 5), GradedTensor.letter(1, d, 5)
        expected = GradedTensor.zero(d, 5)
        term = x1
        for l in range(5):
            expected = expected + (F.bernoulli(l) / math.factorial(l)) * term
            term = bracket(e1, term)
        assert max_abs_diff(got, expected) <= 1e-14

    def test_rejects_bad_vectors(self):
        with pytest.raises(ValueError):
            F.hn_vector((), 4)
        with pytest.raises(ValueError):
            F.hn_vector((0,), 4)


class TestSymmetrizedProduct:
    def test_single_replacement(self):
        d, depth = 4, 4
        e1, v = GradedTensor.letter(0, d, depth), GradedTensor.letter(1, d, depth)
        a1 = GradedTensor.letter(2, d, depth)
        out = F.symmetrized_derivation_product([a1], mul(e1, v))
        assert max_abs_diff(out, mul(a1, v)) == 0

    def test_double_replacement(self):
        d, depth = 4, 4
        e1 = GradedTensor.letter(0, d, depth)
        a1, a2 = GradedTensor.letter(2, d, depth), GradedTensor.letter(3, d, depth)
        out = F.symmetrized_derivation_product([a1, a2], mul(e1, e1))
        assert max_abs_diff(out, mul(a1, a2) + mul(a2, a1)) == 0

    def test_insufficient_occurrences_give_zero(self):
        d, depth = 4, 4
        v = GradedTensor.letter(1, d, depth)
        a1, a2 = GradedTensor.letter(2, d, depth), GradedTensor.letter(3, d, depth)
        assert F.symmetrized_derivation_product([a1, a2], v).is_zero()

    def test_nested_ad_expansion(self):
        # the substitution into ad_{e1}^l(v) expands into interleaved
        # ad-compositions, l = 3, r = 2
        d, depth = 4, 6
        e1, v = GradedTensor.letter(0, d, depth), GradedTensor.letter(1, d, depth)
        reps = [GradedTensor.letter(2, d, depth), GradedTensor.letter(3, d, depth)]
        target = v
        for _ in range(3):
            target = bracket(e1, target)
        lhs = F.symmetrized_derivation_product(reps, target)

        rhs = GradedTensor.zero(d, depth)
        for sigma in itertools.permutations(range(2)):
            for xs in itertools.product(range(2), repeat=3):
                if sum(xs) != 1:
                    continue
                t = v
                for _ in range(xs[2]):
                    t = bracket(e1, t)
                t = bracket(reps[sigma[1]], t)
                for _ in range(xs[1]):
                    t = bracket(e1, t)
                t = bracket(reps[sigma[0]], t)
                for _ in range(xs[0]):
                    t = bracket(e1, t)
                rhs = rhs + t
        assert max_abs_diff(lhs, rhs) == 0


class TestNestedBrackets:
    def test_single_letter(self):
        assert max_abs_diff(F.right_nested_bracket((0,), 2), GradedTensor.letter(0, 2, 1)) == 0

    def test_two_letters(self):
        out = F.right_nested_bracket((0, 1), 2)
        assert out.coeff((0, 1)) == 1 and out.coeff((1, 0)) == -1

    def test_three_letters(self):
        out = F.right_nested_bracket((0, 1, 2), 3)
        e1 = GradedTensor.letter(0, 3, 3)
        br = bracket(GradedTensor.letter(1, 3, 3), GradedTensor.letter(2, 3, 3))
        assert max_abs_diff(out, mul(e1, br) - mul(br, e1)) == 0

    def test_liemon_small(self):
        assert max_abs_diff(F.liemon_expand((0, 1), 2), F.right_nested_bracket((0, 1), 2)) == 0
        assert max_abs_diff(F.liemon_expand((0, 1, 2), 3), F.right_nested_bracket((0, 1, 2), 3)) == 0

    def test_liemon_random_length_six(self, rng):
        J = tuple(rng.integers(0, 3, size=6))
        assert max_abs_diff(F.liemon_expand(J, 3), F.right_nested_bracket(J, 3)) == 0


class TestPermutationCoefficients:
    def test_identity_orders(self):
        assert F.chen_strichartz_coeff((1,)) == 1
        assert F.chen_strichartz_coeff((1, 2)) == 0.25
        assert F.chen_strichartz_coeff((2, 1)) == -0.25

    def test_degree_two_log_reconstruction(self, rng):
        # the bracket-form weights reproduce the degree-2 log-signature
        # of a two-letter signature from its level-2 word integrals
        from sigroc.signatures import log_signature, signature

        p = random_path(rng, 4)
        sig = signature(p, 2)
        L2 = log_signature(p, 2).levels[2]
        recon = GradedTensor.zero(2, 2)
        for sigma in itertools.permutations((1, 2)):
            w = F.chen_strichartz_coeff(sigma)
            for J in itertools.product(range(2), repeat=2):
                # time t_{sigma(k)} carries increment letter J_k
                pos = {sigma[k]: J[k] for k in range(2)}
                integral = sig.coeff((pos[1], pos[2]))
                recon = recon + (w * integral) * F.right_nested_bracket(J, 2).truncated(2)
        assert np.max(np.abs(recon.levels[2] - L2)) <= 1e-12

    def test_smoke_sum_over_s3(self):
        total = sum(abs(F.chen_strichartz_coeff(s)) for s in itertools.permutations((1, 2, 3)))
        assert total == pytest.approx(2 * (1 / 9) + 4 * (1 / 18))

    def test_rejects_non_permutations(self):
        with pytest.raises(ValueError):
            F.chen_strichartz_coeff((1, 3))


class TestConsecutiveShuffleSum:
    def test_single_permutation_case(self):
        assert F.consecutive_shuffle_sum([2.0, 5.0], 0) == pytest.approx(0.2)
        assert F.consecutive_shuffle_closed_form([2.0, 5.0], 0) == pytest.approx(0.2)

    def test_r2_s1(self):
        c = [1.0, 2.0, 3.0]
        lhs = F.consecutive_shuffle_sum(c, 1)
        rhs = F.consecutive_shuffle_closed_form(c, 1)
        assert abs(lhs - rhs) / abs(rhs) <= 1e-12

    def test_r5_random(self, rng):
        for _ in range(5):
            c = _nondegenerate_complex(rng, 6)
            for s in range(6):
                lhs = F.consecutive_shuffle_sum(c, s)
                rhs = F.consecutive_shuffle_closed_form(c, s)
                assert abs(lhs - rhs) / abs(rhs) <= 1e-10

    def test_zero_denominator(self):
        with pytest.raises(ZeroDivisionError):
            F.consecutive_shuffle_sum([1.0, -1.0, 1.0], 0)

    def test_range_check(self):
        with pytest.raises(ValueError):
            F.consecutive_shuffle_sum([1.0, 2.0], 5)


class TestDynkin:
    def test_bracket_is_lie(self):
        ok, resid = F.dynkin_is_lie(bracket(letter(0), letter(1)))
        assert ok and resid == 0

    def test_word_is_not_lie(self):
        ok, resid = F.dynkin_is_lie(mul(letter(0), letter(1)))
        assert not ok

    def test_log_signature_is_lie(self, rng):
        from sigroc.signatures import log_signature

        p = random_path(rng, 4)
        ok, resid = F.dynkin_is_lie(log_signature(p, 6))
        assert ok and resid <= 1e-10

    def test_scalar_rejected(self):
        with pytest.raises(ValueError):
            F.dynkin_is_lie(GradedTensor.unit(2, 3))


class TestNeoClassicalInequality:
    @pytest.mark.parametrize("p", [1, 2, 3])
    def test_inequality(self, p):
        for m in range(0, 31):
            lhs = sum(
                1.0 / (math.gamma(i / p + 1) * math.gamma((m - i) / p + 1))
                for i in range(m + 1)
            )
            rhs = p * 2 ** (m / p) / math.gamma(m / p + 1)
            assert lhs <= rhs * (1 + 1e-12)


def _nondegenerate_complex(rng, n, floor=0.1):
    while True:
        c = rng.normal(size=n) + 1j * rng.normal(size=n)
        if all(
            abs(c[i : j + 1].sum()) >= floor for i in range(n) for j in range(i, n)
        ):
            return c
