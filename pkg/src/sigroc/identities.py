"""Residual batteries certifying finite radius of convergence.

Each battery evaluates a family of integral functionals that must all
vanish when the log-signature of the path has infinite radius of
convergence.  A residual clearly above numerical noise therefore
certifies a finite radius; small residuals are inconclusive (the
batteries never claim the radius is infinite).  Verdicts are data, not
exceptions: inapplicable hypotheses produce a "not-applicable" report.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

from . import expint
from .expint import FourierOneForm
from .paths import PiecewisePath, brownian_sample, conjugated_line
from .signatures import RocProfile, log_signature, roc_profile, signature
from .tensor import inv, max_abs_diff, mul

CERT_FLOOR = 1e-6
CERT_TOL_FACTOR = 100.0

VERDICT_CERTIFIED = "finite-roc-certified"
VERDICT_INCONCLUSIVE = "inconclusive"
VERDICT_NOT_APPLICABLE = "not-applicable"

# default b-grid for the two-parameter second-order battery
DEFAULT_B_GRID = (
    1.0,
    -1.0,
    2.0,
    -2.0,
    1j * math.pi,
    -1j * math.pi,
    2j * math.pi,
    -2j * math.pi,
    4j * math.pi,
    -4j * math.pi,
)


@dataclass
class ReportRow:
    id: str
    params: dict
    residual: float


@dataclass
class IdentityReport:
    path: str
    battery: str
    rows: list[ReportRow]
    verdict: str
    engine: dict = field(default_factory=dict)

    def max_residual(self) -> float:
        return max((r.residual for r in self.rows), default=0.0)

    def to_json_dict(self) -> dict:
        return {
            "path": self.path,
            "battery": self.battery,
            "rows": [
                {"id": r.id, "params": r.params, "residual": r.residual} for r in self.rows
            ],
            "verdict": self.verdict,
            "engine": self.engine,
        }


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("LOGSIG_THREADS", "1")))
    except ValueError:
        return 1


def _run_rows(jobs: Sequence[tuple[str, dict, Callable[[], float]]]) -> list[ReportRow]:
    """Evaluate independent rows, optionally on a thread pool."""
    n = _threads()
    if n > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(max_workers=n) as pool:
            residuals = list(pool.map(lambda job: job[2](), jobs))
    else:
        residuals = [job[2]() for job in jobs]
    return [ReportRow(rid, params, float(res)) for (rid, params, _), res in zip(jobs, residuals)]


def _verdict(rows: list[ReportRow], engine_tol: float) -> str:
    threshold = max(CERT_FLOOR, CERT_TOL_FACTOR * engine_tol)
    if any(r.residual > threshold for r in rows):
        return VERDICT_CERTIFIED
    return VERDICT_INCONCLUSIVE


def _engine_info(engine_tol: float, **params) -> dict:
    """Engine block of a report: truncation, tolerances, battery bounds.

    The integral engines are closed-form (no series truncation), so
    the truncation slot is null unless a battery says otherwise.
    """
    return {
        "truncation": None,
        "tolerances": {
            "engine": engine_tol,
            "certification": max(CERT_FLOOR, CERT_TOL_FACTOR * engine_tol),
        },
        **params,
    }


def is_nondegenerate(seq: Sequence[int | complex]) -> bool:
    """True iff no consecutive block of the sequence sums to zero."""
    m = len(seq)
    if m < 1:
        raise ValueError("need a nonempty sequence")
    for i in range(m):
        acc = 0
        for j in range(i, m):
            acc = acc + seq[j]
            if acc == 0:
                return False
    return True


def _name(p: PiecewisePath) -> str:
    return p.name or "path"


def thm_lineint_battery(p: PiecewisePath, k_max: int = 5, engine_tol: float = 1e-10) -> IdentityReport:
    """First-order battery: |int e^{2k pi i x/x1} dy| for 0 < |k| <= k_max.

    Requires a non-closed first coordinate; the frequency is rescaled by
    the x-increment.  Blind to paths whose loops cancel pairwise.
    """
    x_inc = float(p.end[0].real - p.start[0].real)
    engine = _engine_info(engine_tol, k_max=k_max)
    if abs(x_inc) <= 1e-12:
        return IdentityReport(_name(p), "lineint", [], VERDICT_NOT_APPLICABLE, engine)
    jobs = [
        (
            "lineint",
            {"k": k},
            (lambda k=k: abs(expint.exp_line_integral(p, 2j * math.pi * k / x_inc))),
        )
        for k in range(-k_max, k_max + 1)
        if k != 0
    ]
    rows = _run_rows(jobs)
    return IdentityReport(_name(p), "lineint", rows, _verdict(rows, engine_tol), engine)


def doubint_battery(
    p: PiecewisePath,
    k_range: int = 3,
    b_grid: Sequence[complex] = DEFAULT_B_GRID,
    engine_tol: float = 1e-10,
) -> IdentityReport:
    """Second-order battery on a normalized path.

    Rows are |double integral(p, q)| over nonzero p, q with p + q != 0,
    plus the two-parameter expression on a default b-grid for k in
    {1, 2}.
    """
    engine = _engine_info(engine_tol, k_range=k_range, b_grid=[str(b) for b in b_grid])
    try:
        expint._require_normalized(p)
    except ValueError:
        return IdentityReport(_name(p), "doubint", [], VERDICT_NOT_APPLICABLE, engine)
    jobs = []
    for pk in range(-k_range, k_range + 1):
        for qk in range(-k_range, k_range + 1):
            if pk == 0 or qk == 0 or pk + qk == 0:
                continue
            jobs.append(
                (
                    "pq",
                    {"p": pk, "q": qk},
                    (lambda pk=pk, qk=qk: abs(expint.pq_double_integral(p, pk, qk))),
                )
            )
    for k in (1, 2):
        for b in b_grid:
            jobs.append(
                (
                    "doubint-b",
                    {"k": k, "b": str(complex(b))},
                    (lambda k=k, b=b: abs(expint.doubint_expression(p, k, b))),
                )
            )
    rows = _run_rows(jobs)
    return IdentityReport(_name(p), "doubint", rows, _verdict(rows, engine_tol), engine)


def iterint_battery(
    p: PiecewisePath,
    m_max: int = 3,
    k_bound: int = 3,
    budget: int = 5000,
    engine_tol: float = 1e-9,
) -> IdentityReport:
    """Higher-order battery: |S_m| over non-degenerate integer words.

    Enumerates sequences (k_1..k_m) with 0 < |k_j| <= k_bound and no
    zero consecutive sums, m <= m_max; evaluation stops after ``budget``
    sequences (the count evaluated is reported).
    """
    engine = _engine_info(engine_tol, m_max=m_max, k_bound=k_bound, budget=budget)
    try:
        expint._require_normalized(p)
    except ValueError:
        return IdentityReport(_name(p), "iterint", [], VERDICT_NOT_APPLICABLE, engine)
    cache: dict = {}
    rows: list[ReportRow] = []
    evaluated = truncated = 0
    for m in range(1, m_max + 1):
        for ks in itertools.product([k for k in range(-k_bound, k_bound + 1) if k], repeat=m):
            if not is_nondegenerate(ks):
                continue
            if evaluated >= budget:
                truncated += 1
                continue
            evaluated += 1
            rates = tuple(2j * math.pi * k for k in ks)
            res = abs(expint.s_m(p, rates, cache=cache))
            rows.append(ReportRow("sm", {"k": list(ks)}, float(res)))
    engine["evaluated"] = evaluated
    engine["skipped_over_budget"] = truncated
    return IdentityReport(_name(p), "iterint", rows, _verdict(rows, engine_tol), engine)


def default_one_form_library(k_max: int = 4, y_degrees: Sequence[int] = (0, 1, 2)) -> list[FourierOneForm]:
    """Fourier modes with polynomial y-weights, as dx- and dy-forms.

    The dx-forms use only nonzero frequencies, so their x-average
    vanishes as the generalized line-integral condition requires.
    """
    forms = []
    for k in range(-k_max, k_max + 1):
        if k == 0:
            continue
        for j in y_degrees:
            poly = [0.0] * j + [1.0]
            forms.append(FourierOneForm(g_modes={k: poly}, label=f"g:k={k},y^{j}"))
            forms.append(FourierOneForm(f_modes={k: poly}, label=f"f:k={k},y^{j}"))
    return forms


def gen_lineint_battery(
    p: PiecewisePath,
    forms: Sequence[FourierOneForm] | None = None,
    engine_tol: float = 1e-9,
) -> IdentityReport:
    """Smooth one-form battery; needs a closed second coordinate.

    Applies only when y returns to its start (the periodization
    argument requires it); rows are |line integral| per form.
    """
    engine = _engine_info(engine_tol)
    y_inc = float(p.end[1].real - p.start[1].real)
    x_ok = True
    try:
        expint._require_normalized(p)
    except ValueError:
        x_ok = False
    if abs(y_inc) > 1e-10 or not x_ok:
        return IdentityReport(_name(p), "genform", [], VERDICT_NOT_APPLICABLE, engine)
    if forms is None:
        forms = default_one_form_library()
    engine["forms"] = len(forms)
    jobs = [
        (
            "oneform",
            {"form": form.label or str(i)},
            (lambda form=form: abs(expint.one_form_integral(p, form))),
        )
        for i, form in enumerate(forms)
    ]
    rows = _run_rows(jobs)
    return IdentityReport(_name(p), "genform", rows, _verdict(rows, engine_tol), engine)


ALL_BATTERIES = {
    "lineint": thm_lineint_battery,
    "doubint": doubint_battery,
    "iterint": iterint_battery,
    "genform": gen_lineint_battery,
}


def run_battery(p: PiecewisePath, battery: str, **kwargs) -> list[IdentityReport]:
    if battery == "all":
        return [fn(p) for fn in ALL_BATTERIES.values()]
    if battery not in ALL_BATTERIES:
        raise ValueError(f"unknown battery {battery!r}")
    return [ALL_BATTERIES[battery](p, **kwargs)]


# -- conjugation and statistical checks ------------------------------------


def conjugation_decay_check(alpha: PiecewisePath | None, depth: int = 14) -> dict:
    """Conjugating a segment must keep the tail decay class.

    Profiles the log-signature of alpha . e1 . reversed(alpha) and also
    verifies the algebraic conjugation identity
    log S(b . g . rev(b)) = S(b) log S(g) S(b)^{-1} at depth <= 8.
    """
    conj = conjugated_line(alpha)
    profile: RocProfile = roc_profile(log_signature(conj, depth))

    check_depth = min(depth, 8)
    if alpha is None or alpha.n_segments == 0:
        identity_residual = 0.0
    else:
        sig_b = signature(alpha, check_depth)
        inner = log_signature(PiecewisePath([(0.0, 0.0), (1.0, 0.0)]), check_depth)
        lhs = log_signature(conj, check_depth)
        rhs = mul(mul(sig_b, inner), inv(sig_b))
        identity_residual = max_abs_diff(lhs, rhs)
    return {
        "verdict": profile.verdict,
        "slope": profile.slope,
        "identity_residual": float(identity_residual),
        "profile": profile,
    }


def brownian_lineint_statistic(
    steps: int = 1024,
    n_seeds: int = 200,
    seed0: int = 0,
    threshold: float = 1e-3,
) -> dict:
    """Fraction of random-walk samples with a clearly nonzero residual.

    For each seed, measures |int sin(2 pi X/X_1) dY| on a planar walk.
    A sanity check on the almost-sure statement, not a reproduction:
    certification requires at least 95% of seeds above the threshold.
    """
    hits = 0
    values = []
    for s in range(seed0, seed0 + n_seeds):
        p = brownian_sample(steps, s, d=2)
        x1 = float(p.end[0] - p.start[0])
        if abs(x1) < 1e-12:
            values.append(0.0)
            continue
        val = abs(expint.exp_line_integral(p, 2j * math.pi / x1).imag)
        values.append(val)
        if val > threshold:
            hits += 1
    frac = hits / n_seeds
    return {
        "fraction": frac,
        "certified": frac >= 0.95,
        "threshold": threshold,
        "n_seeds": n_seeds,
        "min": min(values),
    }
