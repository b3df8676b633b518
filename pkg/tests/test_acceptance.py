"""Acceptance gate: one test per criterion, each printing a verdict line.

Every tolerance is pinned here; timing budgets are asserted against
wall-clock measurements of the criterion body.
"""

import itertools
import math
import time

import numpy as np
import pytest

from sigroc import develop as D
from sigroc import expint as E
from sigroc import freelie as F
from sigroc import identities as I
from sigroc import paths as P
from sigroc import winding as W
from sigroc.signatures import log_signature, signature
from sigroc.tensor import (
    GradedTensor,
    inv,
    is_group_like,
    level_norm,
    max_abs_diff,
    mul,
)

# engine regression fixture for the figure-eight double integral,
# frozen at bring-up; equals -i/(2*pi^2) to machine precision
FIGURE8_PQ12 = complex(0.0, -0.0506605918211689)


def _report(number: str, label: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    extra = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {number} {label}: {status}{extra}")


def _budget(number: str, label: str, elapsed: float, budget: float) -> None:
    ok = elapsed < budget
    _report(number, f"{label} runtime", ok, f"{elapsed:.2f}s < {budget:.0f}s")
    assert ok


@pytest.fixture(scope="module")
def seeded_norm3():
    rng = np.random.default_rng(1234)
    while True:
        verts = np.vstack([np.zeros((1, 2)), np.cumsum(rng.normal(size=(3, 2)), axis=0)])
        p = P.PiecewisePath(verts)
        if np.linalg.norm(p.end - p.start) > 0.2:
            return P.normalize(p)


class TestCriterion01FigureEightValue:
    def test_regression_fixture_and_certification(self, figure8):
        t0 = time.perf_counter()
        val = E.pq_double_integral(figure8, 1, 2)
        elapsed = time.perf_counter() - t0
        ok_fix = abs(val - FIGURE8_PQ12) <= 1e-10
        _report("01a", "figure-eight frozen engine value", ok_fix, f"value {val:.12f}")
        assert ok_fix
        # nonzero beyond every certification threshold
        ok_nz = abs(val) > 1e-3
        _report("01b", "figure-eight value certifies finite ROC", ok_nz)
        assert ok_nz
        _budget("01", "figure-eight value", elapsed, 1.0)

    def test_reference_decimal_band(self, figure8):
        # the two-decimal reference approximation; the computed double
        # integral is -i/(2*pi^2) ~ -0.0507i, which does not sit inside
        # the +-0.01 band around (-0.05, -0.08).  Kept as stated; see
        # the decisions log for the analysis.
        val = E.pq_double_integral(figure8, 1, 2)
        ok = abs(val.real - (-0.05)) <= 0.01 and abs(val.imag - (-0.08)) <= 0.01
        _report("01c", "figure-eight reference decimals +-0.01", ok, f"value {val:.6f}")
        assert ok, (
            f"computed {val:.6f}; the reference decimals (-0.05-0.08i) are not "
            "reproducible from the stated vertex data (value is -i/(2*pi^2))"
        )


class TestCriterion02BchHausdorff:
    def test_sum_matches_bch(self):
        t0 = time.perf_counter()
        e1, e2 = GradedTensor.letter(0, 2, 8), GradedTensor.letter(1, 2, 8)
        total = GradedTensor.zero(2, 8)
        for n in range(0, 9):
            total = total + F.hausdorff_hn(n, e1, 1)
        resid = max_abs_diff(total, F.bch(e1, e2))
        ok = resid <= 1e-10
        _report("02", "Hausdorff sum equals BCH at depth 8", ok, f"resid {resid:.2e}")
        assert ok

        # printed low-degree terms: 1/2 [v,w] and +-1/12 [.,[.,.]]
        from sigroc.tensor import bracket

        b = F.bch(GradedTensor.letter(0, 2, 3), GradedTensor.letter(1, 2, 3))
        e1s, e2s = GradedTensor.letter(0, 2, 3), GradedTensor.letter(1, 2, 3)
        br = bracket(e1s, e2s)
        want = e1s + e2s + 0.5 * br + (1 / 12) * bracket(e1s, br) - (1 / 12) * bracket(e2s, br)
        resid2 = max_abs_diff(b, want)
        ok2 = resid2 <= 1e-12
        _report("02", "BCH printed low-degree terms", ok2, f"resid {resid2:.2e}")
        assert ok2
        _budget("02", "BCH/Hausdorff", time.perf_counter() - t0, 5.0)


class TestCriterion03LineIntegralZeros:
    def test_infinite_roc_fixtures(self, diagonal, conj_line):
        t0 = time.perf_counter()
        worst = 0.0
        for p in (diagonal, conj_line):
            for k in range(-5, 6):
                if k == 0:
                    continue
                worst = max(worst, abs(E.exp_line_integral(p, 2j * math.pi * k)))
        ok = worst <= 1e-10
        _report("03", "first-order zeros on infinite-ROC fixtures", ok, f"worst {worst:.2e}")
        assert ok
        _budget("03", "first-order zeros", time.perf_counter() - t0, 1.0)


class TestCriterion04Develop2d:
    def test_entire_function_identity(self, conj_line_slanted):
        t0 = time.perf_counter()
        lams = [0.5, 1 + 1j, math.pi * 1j / 2]
        profs = D.develop_2d_identity_profiles(conj_line_slanted, lams, 1.0, [16, 18, 20])
        noise_floor = 5e-15
        all_ok = True
        for lam in lams:
            prof = profs[complex(lam)]
            ok_val = prof[20] <= 1e-6
            ok_mono = (
                prof[16] >= prof[18] - noise_floor and prof[18] >= prof[20] - noise_floor
            )
            _report(
                "04",
                f"2D development identity, lambda={lam}",
                ok_val and ok_mono,
                f"r16={prof[16]:.2e} r18={prof[18]:.2e} r20={prof[20]:.2e}",
            )
            all_ok = all_ok and ok_val and ok_mono
        assert all_ok
        _budget("04", "2D development identity", time.perf_counter() - t0, 10.0)


class TestCriterion05DmDevelopment:
    def test_corner_coefficients(self, conj_line, figure8, seeded_norm3):
        t0 = time.perf_counter()
        fixtures = [("conj", conj_line), ("figure8", figure8), ("random3", seeded_norm3)]
        all_ok = True
        for name, p in fixtures:
            r2, _ = D.dm_dev_coeff_residual(p, (1.1, -0.8), (1, 2), 14)
            r3, _ = D.dm_dev_coeff_residual(p, (0.9, -0.6, 0.4), (1, 2, 3), 14)
            ok = r2 <= 1e-6 and r3 <= 1e-5
            _report("05", f"developed corner coefficient on {name}", ok,
                    f"m2 {r2:.2e} m3 {r3:.2e}")
            all_ok = all_ok and ok
        assert all_ok
        _budget("05", "developed corner coefficients", time.perf_counter() - t0, 60.0)


class TestCriterion06FdkBand:
    def test_band_identities(self, seeded_norm3):
        t0 = time.perf_counter()
        rates = (0.9, -0.6, 0.4)
        all_ok = True
        for k in (1, 2, 3):
            resid, tail = D.fdk_residual(seeded_norm3, rates, k, 14)
            ok = resid <= 1e-6
            _report("06", f"band development k={k}", ok, f"resid {resid:.2e} tail {tail:.2e}")
            all_ok = all_ok and ok
        assert all_ok
        _budget("06", "band development", time.perf_counter() - t0, 60.0)


class TestCriterion07ConsecutiveSums:
    def test_identity(self):
        t0 = time.perf_counter()
        rng = np.random.default_rng(777)
        worst = 0.0
        for R in range(1, 7):
            count = 0
            while count < 100:
                c = rng.normal(size=R + 1) + 1j * rng.normal(size=R + 1)
                if not all(
                    abs(c[i : j + 1].sum()) >= 0.1
                    for i in range(R + 1)
                    for j in range(i, R + 1)
                ):
                    continue
                count += 1
                for s in range(R + 1):
                    lhs = F.consecutive_shuffle_sum(c, s)
                    rhs = F.consecutive_shuffle_closed_form(c, s)
                    worst = max(worst, abs(lhs - rhs) / abs(rhs))
        ok = worst <= 1e-10
        _report("07", "consecutive-sum shuffle identity", ok, f"worst rel {worst:.2e}")
        assert ok
        _budget("07", "consecutive-sum identity", time.perf_counter() - t0, 5.0)


class TestCriterion08NestedBrackets:
    def test_exhaustive_expansion(self):
        t0 = time.perf_counter()
        worst = 0.0
        for m in range(2, 7):
            for J in itertools.product(range(3), repeat=m):
                worst = max(
                    worst, max_abs_diff(F.liemon_expand(J, 3), F.right_nested_bracket(J, 3))
                )
        ok = worst == 0.0
        _report("08", "nested-bracket expansion, exhaustive to length 6", ok,
                f"worst {worst:.1e}")
        assert ok
        _budget("08", "nested-bracket expansion", time.perf_counter() - t0, 10.0)


class TestCriterion09VectorHausdorffRecursion:
    def test_recursion_equals_direct(self):
        t0 = time.perf_counter()
        worst = 0.0
        for K in [(1,), (2,), (3,), (1, 1), (1, 2), (2, 1), (1, 1, 1)]:
            diff = max_abs_diff(
                F.hn_vector(K, 5, method="direct"), F.hn_vector(K, 5, method="recursive")
            )
            worst = max(worst, diff)
        ok = worst <= 1e-12
        _report("09", "vector Hausdorff recursion", ok, f"worst {worst:.2e}")
        assert ok
        _budget("09", "vector Hausdorff recursion", time.perf_counter() - t0, 10.0)


class TestCriterion10AlgebraicInvariants:
    def test_builder_paths(self):
        t0 = time.perf_counter()
        builders = [
            P.line([0.3, 1.1]),
            P.square_loop(),
            P.figure_eight(),
            P.brownian_sample(32, seed=5),
        ]
        all_ok = True
        for p in builders:
            sig = signature(p, 6)
            gl_ok, gl = is_group_like(sig)
            lie_ok, lie = F.dynkin_is_lie(log_signature(p, 6))
            rev = max_abs_diff(signature(P.reverse(p), 6), inv(sig))
            mid = P.PathTime(p.n_segments // 2, 0.5)
            from sigroc.signatures import signature_interval

            splice = max_abs_diff(
                mul(
                    signature_interval(p, p.path_start(), mid, 6),
                    signature_interval(p, mid, p.path_end(), 6),
                ),
                sig,
            )
            V = P.total_variation(p)
            fac_ok = all(
                level_norm(sig, n) <= V**n / math.factorial(n) + 1e-12 for n in range(7)
            )
            ok = (
                gl_ok and gl <= 1e-10
                and lie_ok and lie <= 1e-10
                and rev <= 1e-12
                and splice <= 1e-12
                and fac_ok
            )
            _report(
                "10",
                f"invariants on {p.name}",
                ok,
                f"shuffle {gl:.1e} lie {lie:.1e} rev {rev:.1e} splice {splice:.1e}",
            )
            all_ok = all_ok and ok
        assert all_ok
        _budget("10", "algebraic invariants", time.perf_counter() - t0, 10.0)


class TestCriterion11Winding:
    def test_winding_suite(self, figure8, square):
        t0 = time.perf_counter()
        th = 2 * math.pi * np.arange(65) / 64
        circle = P.PiecewisePath(np.column_stack([np.cos(th), np.sin(th)]))
        ok_circle = W.winding_number(circle, (0.0, 0.0)) == 1
        _report("11", "64-gon winding number", ok_circle)

        f = W.GaussianBump(1.0, 0.55, 0.48, 0.22)
        g = W.GaussianBump(0.8, 0.47, 0.55, 0.25)
        r400 = W.green_residual(square, f, g, 400)
        r800 = W.green_residual(square, f, g, 800)
        ok_green = r400 <= 1e-3 and r800 < r400
        _report("11", "Green residual on the square", ok_green,
                f"r400 {r400:.2e} r800 {r800:.2e}")

        grid = W.winding_field(P.tilde(figure8), (-0.2, 1.2, -0.45, 0.45), 50, 50)
        ok_field = bool(np.all(grid.values[~grid.mask] == 0))
        _report("11", "figure-eight hull winding field is zero", ok_field)

        assert ok_circle and ok_green and ok_field
        _budget("11", "winding", time.perf_counter() - t0, 30.0)


class TestCriterion12NeoClassical:
    def test_inequality(self):
        t0 = time.perf_counter()
        ok = True
        for p in (1, 2, 3):
            for m in range(31):
                lhs = sum(
                    1.0 / (math.gamma(i / p + 1) * math.gamma((m - i) / p + 1))
                    for i in range(m + 1)
                )
                rhs = p * 2 ** (m / p) / math.gamma(m / p + 1)
                ok = ok and lhs <= rhs * (1 + 1e-12)
        _report("12", "neo-classical inequality", ok)
        assert ok
        _budget("12", "neo-classical inequality", time.perf_counter() - t0, 1.0)


class TestCriterion13BrownianStatistic:
    def test_statistical_certification(self):
        t0 = time.perf_counter()
        out = I.brownian_lineint_statistic(steps=1024, n_seeds=200, seed0=0, threshold=1e-3)
        ok = out["fraction"] >= 0.95
        _report("13", "random-walk statistical certification", ok,
                f"fraction {out['fraction']:.3f} min {out['min']:.2e}")
        assert ok and out["certified"]
        _budget("13", "random-walk statistic", time.perf_counter() - t0, 60.0)
