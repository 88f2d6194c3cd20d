"""Tabular outputs (energies, phase shifts, potential scans, wavefunctions).

Each builder returns a :class:`Table`; the CLI only parses options and
serializes tables.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import analytic
from .model import Channel, ModelParams
from .monopole import coupling_k
from .oracle import AsymptoticRegimeError, extract_phase_shift, scattering_solution
from .potentials import Mode, scan
from .presets import EnergyPreset, ScanPreset, WavefunctionPreset
from .specfun import GammaPoleError

NEAR_POLE = 1e-6


@dataclass
class Table:
    columns: list[str]
    rows: list[list] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)

    def add(self, **values) -> None:
        self.rows.append([values.get(c) for c in self.columns])

    def column(self, name: str) -> list:
        i = self.columns.index(name)
        return [row[i] for row in self.rows]


# ------------------------------------------------------------------ energies

ENERGY_COLUMNS = [
    "n", "l", "alpha", "xi", "status", "E_nl", "E_formula", "n_max",
    "S_alpha", "K_alpha", "terms_used", "tail_estimate",
]
TABLE1_COLUMNS = ENERGY_COLUMNS + ["E_published", "rel_deviation"]


def energy_row(params: ModelParams, channel: Channel, tol: float, xi_limit: bool = False) -> dict:
    """One energy record; inadmissible channels get status NO_BOUND and an empty E_nl.

    ``E_formula`` is the closed-form expression evaluated regardless of the
    bound-state condition (what parameter-sweep plots of the formula show).
    """
    coupling = coupling_k(params, tol)
    row = dict(
        n=channel.n,
        l=channel.l,
        alpha=params.alpha,
        xi=0.0 if xi_limit else params.xi,
        S_alpha=coupling.s_alpha,
        K_alpha=coupling.k_alpha,
        terms_used=coupling.terms_used,
        tail_estimate=coupling.tail_estimate,
    )
    if xi_limit:
        e = analytic.xi_limit_energy(params, coupling, channel)
        bound = params.ze2 > coupling.k_alpha
        row.update(E_formula=e, n_max=math.inf if bound else 0)
        row.update(status="OK" if bound else "NO_BOUND", E_nl=e if bound else None)
        return row
    row["E_formula"] = analytic.explicit_energy(params, coupling, channel)
    row["n_max"] = analytic.bound_state_count(params, coupling, channel.l)
    try:
        row.update(status="OK", E_nl=analytic.bound_energy(params, coupling, channel))
    except analytic.NoBoundStateError:
        row.update(status="NO_BOUND", E_nl=None)
    return row


def energies_table(
    base: ModelParams,
    alphas,
    xis,
    ls,
    ns,
    tol: float = 1e-12,
    xi_limit: bool = False,
    published: dict | None = None,
) -> Table:
    table = Table(TABLE1_COLUMNS if published else list(ENERGY_COLUMNS))
    for alpha in alphas:
        for xi in xis:
            params = base.replace(alpha=float(alpha), xi=float(xi))
            for l in ls:
                for n in ns:
                    row = energy_row(params, Channel(int(n), int(l)), tol, xi_limit)
                    if published:
                        ref = published.get((int(n), int(l)))
                        row["E_published"] = ref
                        if ref is not None and row["E_nl"] is not None:
                            row["rel_deviation"] = (row["E_nl"] - ref) / abs(ref)
                    table.add(**row)
    return table


def energies_from_preset(preset: EnergyPreset, base: ModelParams | None = None, tol: float = 1e-12) -> Table:
    base = base or ModelParams()
    table = energies_table(base, preset.alphas, preset.xis, preset.ls, preset.ns, tol, preset.xi_limit, preset.published or None)
    table.notes.append(preset.caption)
    return table


# -------------------------------------------------------------- phase shifts

PHASE_COLUMNS = ["l", "E", "k", "kappa", "delta_l", "re_S", "im_S", "abs_S_minus_1", "flag"]
ORACLE_COLUMNS = ["delta_numeric", "delta_difference"]


def _pole_distance(sp: analytic.ScatteringParams) -> float:
    dist = math.inf
    for z in (sp.d + 1j * sp.kappa - sp.delta, sp.d + 1j * sp.kappa + sp.delta):
        n = max(0, round(-z.real))
        dist = min(dist, abs(z + n))
    return dist


def phase_table(
    params: ModelParams,
    ls,
    energies,
    tol: float = 1e-12,
    mode: Mode | str = Mode.APPROX,
    oracle: bool = False,
) -> Table:
    """Phase shifts per (l, E), branch-aligned along E for each l.

    With ``oracle`` the numeric phase of the outward Numerov solution (in
    ``mode``) is appended, together with the wrapped difference.
    """
    coupling = coupling_k(params, tol)
    table = Table(PHASE_COLUMNS + (ORACLE_COLUMNS if oracle else []))
    for l in ls:
        records = []
        for e in energies:
            sp = analytic.scattering_params(params, coupling, int(l), float(e))
            flag = ""
            try:
                delta = analytic.phase_shift(sp)
            except GammaPoleError:
                delta, flag = math.nan, "POLE"
            if not flag and _pole_distance(sp) < NEAR_POLE:
                flag = "NEAR_POLE"
            records.append((sp, delta, flag))
        finite = [i for i, (_, d, _) in enumerate(records) if math.isfinite(d)]
        aligned = analytic.align_branch([records[i][1] for i in finite])
        deltas = [math.nan] * len(records)
        for i, d in zip(finite, aligned):
            deltas[i] = float(d)
        for (sp, _, flag), delta in zip(records, deltas):
            s = analytic.s_matrix(delta) if math.isfinite(delta) else complex(math.nan, math.nan)
            row = dict(
                l=int(l), E=sp.energy, k=sp.k, kappa=sp.kappa, delta_l=delta,
                re_S=s.real, im_S=s.imag, abs_S_minus_1=abs(abs(s) - 1.0), flag=flag,
            )
            if oracle:
                try:
                    sol = scattering_solution(params, coupling, int(l), sp.energy, mode)
                    num = extract_phase_shift(sol, sp.k, sp.ell)
                    row.update(delta_numeric=num, delta_difference=analytic.wrap_phase(delta - num))
                except AsymptoticRegimeError as exc:
                    row.update(flag=(flag + " " if flag else "") + "FIT_FAILED")
                    table.notes.append(str(exc))
            table.add(**row)
    return table


# -------------------------------------------------------------------- scans

SCAN_COLUMNS = ["alpha", "xi", "l", "r", "v_hulthen", "v_self", "v_centrifugal", "v_eff", "additivity_error"]


def scan_table(
    base: ModelParams,
    alphas,
    xi: float,
    l: int,
    mode: Mode | str = Mode.EXACT,
    r_min: float = 0.05,
    r_max: float = 60.0,
    n_points: int = 2000,
    tol: float = 1e-12,
) -> Table:
    table = Table(list(SCAN_COLUMNS))
    for alpha in alphas:
        params = base.replace(alpha=float(alpha), xi=float(xi))
        sc = scan(params, coupling_k(params, tol), int(l), mode, r_min, r_max, n_points, spacing="uniform")
        for r, vh, vs, vc, ve in zip(sc.r, sc.v_hulthen, sc.v_self, sc.v_centrifugal, sc.v_eff):
            table.add(
                alpha=params.alpha, xi=params.xi, l=int(l), r=r, v_hulthen=vh, v_self=vs,
                v_centrifugal=vc, v_eff=ve, additivity_error=ve - (vh + vs + vc),
            )
        i = int(np.argmin(sc.v_eff))
        table.notes.append(
            f"alpha={params.alpha:g}: min v_eff = {sc.v_eff[i]:.6g} at r = {sc.r[i]:.6g}; "
            f"bound-supporting well: {'yes' if sc.has_bound_well() else 'no'}"
        )
    return table


def scan_from_preset(preset: ScanPreset, base: ModelParams | None = None, tol: float = 1e-12) -> Table:
    table = scan_table(
        base or ModelParams(), preset.alphas, preset.xi, preset.l, preset.mode,
        preset.r_min, preset.r_max, preset.n_points, tol,
    )
    table.notes.insert(0, preset.caption)
    return table


# ------------------------------------------------------------ wavefunctions

WAVEFUNCTION_COLUMNS = ["alpha", "xi", "l", "n", "E", "r", "u", "u2"]


def wavefunction_table(
    params: ModelParams, l: int, ns, n_points: int = 20001, tol: float = 1e-12, r_max: float | None = None
) -> Table:
    """Normalized bound radial functions sampled on [0, r_max] (shared grid for all n).

    Channels without a bound state are listed in ``notes`` as NO_BOUND.
    """
    coupling = coupling_k(params, tol)
    table = Table(list(WAVEFUNCTION_COLUMNS))
    states = []
    for n in ns:
        try:
            states.append(analytic.bound_state(params, coupling, Channel(int(n), int(l))))
        except analytic.NoBoundStateError as exc:
            table.notes.append(f"n={n}: NO_BOUND (n_max={exc.n_max})")
    if not states:
        return table
    r_end = r_max or max(s.extent() for s in states)
    r = np.linspace(0.0, r_end, n_points)
    for s in states:
        u = s(r)
        for ri, ui in zip(r, u):
            table.add(alpha=params.alpha, xi=params.xi, l=int(l), n=s.channel.n, E=s.energy, r=ri, u=ui, u2=ui * ui)
    return table


def wavefunction_from_preset(preset: WavefunctionPreset, base: ModelParams | None = None, tol: float = 1e-12) -> Table:
    params = (base or ModelParams()).replace(alpha=preset.alpha, xi=preset.xi)
    table = wavefunction_table(params, preset.l, preset.ns, preset.n_points, tol)
    table.notes.insert(0, preset.caption)
    return table


def max_density_by_n(table: Table) -> dict[int, float]:
    out: dict[int, float] = {}
    for n, u2 in zip(table.column("n"), table.column("u2")):
        out[n] = max(out.get(n, 0.0), u2)
    return out
