"""Acceptance criteria, each returning measured deviations and a pass/fail verdict.

A criterion passes only if its measurement meets the tolerance and it runs
within its time budget.
"""

from __future__ import annotations

import cmath
import math
import time
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np

from . import analytic
from .model import Channel, ModelParams
from .monopole import coupling_k, s_truncated, series_terms, s_series
from .oracle import extract_phase_shift, fitted_phase_offset, scattering_solution, shoot_eigenvalues
from .potentials import Mode
from .presets import FIG5_ALPHAS_ABOVE, FIG5_ALPHAS_BELOW, TABLE1_PUBLISHED, get_preset
from .reports import energies_from_preset, max_density_by_n, scan_from_preset, wavefunction_from_preset
from .specfun import gamma, hyp2f1, hyp2f1_continued, log_gamma

SWEEP_ALPHAS = (0.5, 0.7, 0.9, 1.0, 1.2, 1.5)
SWEEP_XIS = (0.05, 0.1, 0.5)
SWEEP_LMAX = 3


@dataclass
class CriterionResult:
    number: int
    name: str
    passed: bool
    measured: dict
    tolerance: str
    runtime_s: float
    runtime_limit_s: float
    details: list[str] = field(default_factory=list)

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        parts = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return (
            f"[{verdict}] {self.number}. {self.name}: {parts} (tolerance {self.tolerance}; "
            f"runtime {self.runtime_s:.2f}s < {self.runtime_limit_s:g}s)"
        )

    def to_dict(self) -> dict:
        return asdict(self)


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.3g}"
    return str(v)


def _rel(a: float, b: float) -> float:
    if a == b:
        return 0.0
    return abs(a - b) / max(abs(a), abs(b))


def _sweep():
    """Admissible (params, coupling, channel) of the acceptance sweep."""
    for alpha in SWEEP_ALPHAS:
        coupling = coupling_k(alpha)
        for xi in SWEEP_XIS:
            params = ModelParams(alpha=alpha, xi=xi)
            for l in range(SWEEP_LMAX + 1):
                for n in range(analytic.bound_state_count(params, coupling, l)):
                    yield params, coupling, Channel(n, l)


# ---------------------------------------------------------------- criteria


def table1() -> tuple[bool, dict, list[str]]:
    table = energies_from_preset(get_preset("table1"))
    published = dict(zip(zip(table.column("n"), table.column("l")), table.column("E_published")))
    verbatim = published == TABLE1_PUBLISHED and len(table.rows) == 10
    devs = table.column("rel_deviation")
    details = [
        f"E_1,{l}: artifact {e:.7f}  published {p:.7f}  deviation {d:+.2%}"
        for l, e, p, d in zip(table.column("l"), table.column("E_nl"), table.column("E_published"), devs)
    ]
    worst = max(abs(d) for d in devs)
    return verbatim and worst < 0.10, {"published_verbatim": verbatim, "max_rel_deviation": worst}, details


def alpha_one_reduction() -> tuple[bool, dict, list[str]]:
    worst = 0.0
    for xi in (0.05, 0.1, 0.5):
        params = ModelParams(alpha=1.0, xi=xi)
        for n in range(5):
            for l in range(5):
                ch = Channel(n, l)
                worst = max(worst, _rel(analytic.explicit_energy(params, 0.0, ch), analytic.textbook_energy(params, ch)))
    return worst < 1e-12, {"max_rel_diff": worst, "points": 75}, []


def triple_agreement() -> tuple[bool, dict, list[str]]:
    worst, count = 0.0, 0
    for params, coupling, ch in _sweep():
        e1 = analytic.bound_energy(params, coupling, ch)
        e2 = analytic.bound_energy_via_smatrix_pole(params, coupling, ch)
        e3 = analytic.frobenius_energy(params, coupling, ch)
        worst = max(worst, (max(e1, e2, e3) - min(e1, e2, e3)) / abs(e1))
        count += 1
    return worst < 1e-10, {"max_rel_spread": worst, "states": count}, []


def oracle_equivalence() -> tuple[bool, dict, list[str]]:
    worst, count, count_off = 0.0, 0, 0
    details = []
    for alpha in SWEEP_ALPHAS:
        coupling = coupling_k(alpha)
        for xi in SWEEP_XIS:
            params = ModelParams(alpha=alpha, xi=xi)
            for l in range(SWEEP_LMAX + 1):
                expected = analytic.bound_state_count(params, coupling, l)
                found = shoot_eigenvalues(params, coupling, l, Mode.APPROX)
                diff = len(found) - expected
                if diff:
                    details.append(f"alpha={alpha} xi={xi} l={l}: {len(found)} states, formula count {expected}")
                count_off = max(count_off, abs(diff))
                for n, e in enumerate(found[:expected]):
                    worst = max(worst, _rel(e, analytic.bound_energy(params, coupling, Channel(n, l))))
                    count += 1
    ok = worst < 1e-6 and count_off <= 1
    return ok, {"max_rel_error": worst, "states": count, "max_count_mismatch": count_off}, details


def textbook_anchor() -> tuple[bool, dict, list[str]]:
    params = ModelParams(alpha=1.0, xi=0.1)
    closed = analytic.bound_energy(params, 0.0, Channel(0, 0))
    shot = shoot_eigenvalues(params, 0.0, 0, Mode.APPROX, max_states=1)[0]
    hyd = ModelParams(alpha=1.0, xi=1e-4)
    hyd_closed = analytic.bound_energy(hyd, 0.0, Channel(0, 0))
    hyd_shot = shoot_eigenvalues(hyd, 0.0, 0, Mode.EXACT, max_states=1, r_cap=200.0)[0]
    m = {
        "closed_rel_err": _rel(closed, -0.45125),
        "oracle_rel_err": _rel(shot, -0.45125),
        "hydrogenic_closed_abs_err": abs(hyd_closed + 0.5),
        "hydrogenic_oracle_abs_err": abs(hyd_shot + 0.5),
    }
    ok = m["closed_rel_err"] < 1e-6 and m["oracle_rel_err"] < 1e-6
    ok = ok and m["hydrogenic_closed_abs_err"] < 1e-3 and m["hydrogenic_oracle_abs_err"] < 1e-3
    return ok, m, [f"closed form {closed!r}, oracle {shot!r}, hydrogenic {hyd_closed!r} / {hyd_shot!r}"]


def phase_cross_validation() -> tuple[bool, dict, list[str]]:
    analytic_all, numeric_all, unitarity = [], [], 0.0
    for alpha in (0.8, 1.0, 1.2):
        coupling = coupling_k(alpha)
        params = ModelParams(alpha=alpha, xi=0.05)
        for l in (0, 1):
            for e in np.linspace(0.1, 2.0, 10):
                sp = analytic.scattering_params(params, coupling, l, float(e))
                delta = analytic.phase_shift(sp)
                unitarity = max(unitarity, abs(abs(analytic.s_matrix(delta)) - 1.0))
                sol = scattering_solution(params, coupling, l, float(e), Mode.APPROX)
                analytic_all.append(delta)
                numeric_all.append(extract_phase_shift(sol, sp.k, sp.ell))
    offset = fitted_phase_offset(analytic_all, numeric_all)
    worst = max(abs(analytic.wrap_phase(a - n)) for a, n in zip(analytic_all, numeric_all))
    m = {"max_abs_diff_rad": worst, "fitted_offset_rad": offset, "max_abs_S_minus_1": unitarity, "points": 60}
    details = ["convention: analytic delta_l compared with the fit of sin(kr - pi*ell/2 + delta) mod pi; constant offset 0"]
    return worst < 1e-3 and unitarity < 1e-12, m, details


def kernel_suite() -> tuple[bool, dict, list[str]]:
    rng = np.random.default_rng(12345)
    rec = refl = contig = overlap = residual = 0.0
    for _ in range(200):
        z = complex(rng.uniform(-15, 15), rng.uniform(-15, 15))
        if abs(z - round(z.real)) < 1e-3:
            continue
        rec = max(rec, abs(cmath.exp(log_gamma(z + 1) - log_gamma(z)) - z) / abs(z))
        w = complex(rng.uniform(-0.9, 1.9), rng.uniform(-3, 3))
        lhs = gamma(w) * gamma(1 - w)
        rhs = math.pi / cmath.sin(math.pi * w)
        refl = max(refl, abs(lhs - rhs) / abs(rhs))
    for _ in range(200):
        a = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        b = complex(rng.uniform(-2, 2), rng.uniform(-2, 2))
        c = complex(rng.uniform(0.5, 4), rng.uniform(-2, 2))
        y = float(rng.uniform(0, 0.9))
        terms = (c * hyp2f1(a, b, c, y), -c * hyp2f1(a + 1, b, c, y), b * y * hyp2f1(a + 1, b + 1, c + 1, y))
        contig = max(contig, abs(sum(terms)) / max(abs(t) for t in terms))
        direct = hyp2f1(a, b, c, 0.5)
        overlap = max(overlap, abs(hyp2f1_continued(a, b, c, 0.5) - direct) / abs(direct))
    for alpha, xi, l, e in [(0.8, 0.1, 1, 0.5), (1.2, 0.05, 0, 0.2), (0.7, 0.1, 2, 1.0), (1.0, 0.65, 1, 0.05)]:
        params = ModelParams(alpha=alpha, xi=xi)
        sp = analytic.scattering_params(params, coupling_k(alpha), l, e)
        for y in np.linspace(0.05, 0.95, 19):
            residual = max(residual, analytic.hypergeometric_ode_residual(sp, float(y)))
    m = {
        "gamma_recurrence": rec,
        "gamma_reflection": refl,
        "contiguous_relation": contig,
        "continuation_overlap": overlap,
        "ode_residual": residual,
    }
    ok = rec < 1e-12 and refl < 1e-12 and contig < 1e-10 and overlap < 1e-10 and residual < 1e-8
    return ok, m, []


def series_properties() -> tuple[bool, dict, list[str]]:
    terms_one = series_terms(1.0, np.arange(0, 100_000))
    zero_terms = bool(np.all(terms_one == 0.0)) and s_series(1.0).s_alpha == 0.0
    s07, s15 = s_series(0.7).s_alpha, s_series(1.5).s_alpha
    stability = 0.0
    for alpha in (0.5, 0.7, 0.9, 1.2, 1.5, 1.8):
        for n in (1000, 4000, 16000):
            stability = max(stability, abs(s_truncated(alpha, 2 * n).s_alpha - s_truncated(alpha, n).s_alpha))
    m = {"S1_zero_per_term": zero_terms, "S(0.7)": s07, "S(1.5)": s15, "doubling_change": stability}
    return zero_terms and s07 > 0 and s15 < 0 and stability < 1e-12, m, []


def figure_properties() -> tuple[bool, dict, list[str]]:
    details = []
    fig1a = scan_from_preset(get_preset("fig1a"))
    fig1d = scan_from_preset(get_preset("fig1d"))
    wells_a = sum("well: yes" in note for note in fig1a.notes)
    wells_d = sum("well: yes" in note for note in fig1d.notes)
    n_a = len(get_preset("fig1a").alphas)
    fig1a_ok = wells_a == n_a
    fig1d_ok = wells_d == 0

    wf = wavefunction_from_preset(get_preset("fig3a"))
    peaks = max_density_by_n(wf)
    ns = sorted(peaks)
    fig3a_ok = len(ns) == 5 and all(peaks[a] < peaks[b] for a, b in zip(ns, ns[1:]))
    details.append(
        "fig3a: " + (", ".join(f"max|u|^2(n={n})={peaks[n]:.4g}" for n in ns) if ns else "no bound states")
        + "; " + "; ".join(wf.notes[1:])
    )

    flips = []
    for alphas in (FIG5_ALPHAS_ABOVE, FIG5_ALPHAS_BELOW):
        for a1, a2 in zip(alphas, alphas[1:]):
            sign = []
            for l in (1, 3):
                e = [
                    analytic.explicit_energy(ModelParams(alpha=a, xi=0.1), coupling_k(a), Channel(1, l))
                    for a in (a1, a2)
                ]
                sign.append(math.copysign(1.0, e[0] - e[1]))
            flips.append(sign[0] != sign[1])
            details.append(f"fig5 alpha {a1} vs {a2}: sign(E(a1)-E(a2)) l=1 {sign[0]:+.0f}, l=3 {sign[1]:+.0f}")
    fig5_ok = all(flips)
    m = {
        "fig1a_wells": f"{wells_a}/{n_a}",
        "fig1d_wells": wells_d,
        "fig3a_increasing": fig3a_ok,
        "fig5_inversion": fig5_ok,
    }
    return fig1a_ok and fig1d_ok and fig3a_ok and fig5_ok, m, details


CRITERIA: list[tuple[int, str, Callable, str, float]] = [
    (1, "reference table reproduction with disclosure", table1, "published column verbatim, |dev| < 10%", 1.0),
    (2, "alpha = 1 reduction identity", alpha_one_reduction, "1e-12 relative", 1.0),
    (3, "triple agreement (closed form / S-matrix pole / Frobenius)", triple_agreement, "1e-10 relative", 10.0),
    (4, "oracle equivalence on the solvable model", oracle_equivalence, "1e-6 relative, count +-1", 60.0),
    (5, "Hulthen textbook anchor", textbook_anchor, "1e-6 relative; hydrogenic 1e-3", 5.0),
    (6, "phase-shift cross-validation", phase_cross_validation, "1e-3 rad; |S|-1 < 1e-12", 60.0),
    (7, "hypergeometric / Gamma kernel suite", kernel_suite, "1e-12 / 1e-10 / 1e-10 / 1e-8", 10.0),
    (8, "S(alpha) properties", series_properties, "exact zero; signs; 1e-12 under doubling", 5.0),
    (9, "figure-property checks", figure_properties, "qualitative properties hold", 10.0),
]


def run_criterion(number: int) -> CriterionResult:
    num, name, fn, tol, limit = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    ok, measured, details = fn()
    elapsed = time.perf_counter() - start
    return CriterionResult(num, name, bool(ok and elapsed < limit), measured, tol, elapsed, limit, details)


def run_all() -> list[CriterionResult]:
    return [run_criterion(c[0]) for c in CRITERIA]
