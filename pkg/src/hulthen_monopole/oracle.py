"""Direct numerical integration of the radial equation (Numerov) used as an oracle.

The radial equation is written as u'' = q(r) u with

    q(r) = (2M / (hbar^2 alpha^2)) (V_eff(r) - E),

which has no first-derivative term, so the three-term Numerov recurrence
applies directly.  Eigenvalues come from outward/inward shooting with
node-count bracketing; phase shifts from a least-squares fit of the
asymptotic free wave.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .model import ModelParams, d_param, k_value
from .potentials import Mode, v_eff

log = logging.getLogger(__name__)

RESCALE_THRESHOLD = 1e150
DEFAULT_STEP = 0.01
DEFAULT_R_CAP = 3.0e4
TAIL_DECAY_LENGTHS = 40.0
STARTUP_REFINE = 32
STARTUP_NODES = 64


class GridError(ValueError):
    """Invalid radial grid."""


class AsymptoticRegimeError(RuntimeError):
    """The fitted free-wave form does not describe the tail; increase r_max."""


@dataclass(frozen=True)
class RadialGrid:
    """Uniform grid r_i = r_min + i h, i = 0 .. n_points-1."""

    r_min: float
    r_max: float
    n_points: int

    def __post_init__(self) -> None:
        if not (0 < self.r_min < self.r_max) or not math.isfinite(self.r_max):
            raise GridError(f"need 0 < r_min < r_max, got {self.r_min}, {self.r_max}")
        if isinstance(self.n_points, bool) or not isinstance(self.n_points, int) or self.n_points < 16:
            raise GridError(f"n_points must be an integer >= 16, got {self.n_points!r}")

    @classmethod
    def from_step(cls, h: float, r_max: float) -> "RadialGrid":
        """Grid starting at r = h with spacing h, reaching at least ``r_max``."""
        n = int(math.ceil(r_max / h))
        return cls(h, n * h, n)

    @property
    def h(self) -> float:
        return (self.r_max - self.r_min) / (self.n_points - 1)

    @property
    def r(self) -> np.ndarray:
        return self.r_min + self.h * np.arange(self.n_points)


@dataclass
class RadialSolution:
    grid: RadialGrid
    u: np.ndarray
    energy: float
    node_count: int
    diagnostics: list[str] = field(default_factory=list)

    @property
    def r(self) -> np.ndarray:
        return self.grid.r


@njit(cache=True)
def _numerov_into(u, q, h, i0, threshold):
    """Continue u'' = q u from u[i0-1], u[i0] to the end of ``u``; rescale the whole array on overflow.

    Returns the number of rescalings.
    """
    n = q.shape[0]
    c = h * h / 12.0
    w_prev = (1.0 - c * q[i0 - 1]) * u[i0 - 1]
    w = (1.0 - c * q[i0]) * u[i0]
    rescales = 0
    for i in range(i0, n - 1):
        w_next = 2.0 * w - w_prev + h * h * q[i] * u[i]
        u[i + 1] = w_next / (1.0 - c * q[i + 1])
        w_prev = w
        w = w_next
        if abs(u[i + 1]) > threshold:
            scale = 1.0 / threshold
            for j in range(i + 2):
                u[j] *= scale
            w *= scale
            w_prev *= scale
            rescales += 1
    return rescales


@njit(cache=True)
def _numerov(q, h, u0, u1, threshold):
    """Integrate u'' = q u forward from u[0], u[1]; returns (u, number of rescalings)."""
    u = np.empty(q.shape[0])
    u[0] = u0
    u[1] = u1
    return u, _numerov_into(u, q, h, 1, threshold)


def _outward(q: np.ndarray, q_fine: np.ndarray, h: float, u0: float, u1: float) -> tuple[np.ndarray, int]:
    """Outward solution on the coarse grid r_i = (i+1) h.

    The first STARTUP_NODES coarse steps are taken on a grid STARTUP_REFINE
    times finer (``q_fine`` sampled at r_j = (j+1) h / STARTUP_REFINE, started
    from ``u0``, ``u1``).  Near the 1/r^2 singularity a non-integer exponent d
    otherwise degrades the global order of Numerov to about 2d - 1.
    """
    uf, n1 = _numerov(q_fine, h / STARTUP_REFINE, u0, u1, RESCALE_THRESHOLD)
    head = uf[STARTUP_REFINE - 1 :: STARTUP_REFINE]
    u = np.empty(q.shape[0])
    k = min(len(u), len(head))
    u[:k] = head[:k]
    n2 = _numerov_into(u, q, h, k - 1, RESCALE_THRESHOLD) if len(u) > k else 0
    return u, n1 + n2


def _fine_radii(h: float) -> np.ndarray:
    hf = h / STARTUP_REFINE
    return hf * np.arange(1, STARTUP_NODES * STARTUP_REFINE + 1)


@njit(cache=True)
def _count_nodes(u, stop):
    nodes = 0
    last = 0.0
    for i in range(stop):
        if u[i] != 0.0:
            if last != 0.0 and (u[i] > 0.0) != (last > 0.0):
                nodes += 1
            last = u[i]
    return nodes


def _series_start(
    params: ModelParams, coupling, l: int, energy: float, mode: Mode, r0: float, r1: float
) -> tuple[float, float]:
    """Regular start u ~ r^d (1 + c1 r + c2 r^2), normalized so that u(r0) = 1.

    With q = lambda^2/r^2 + g/r + q0 + O(r) the recurrence for the series gives
    c1 = g / (2d) and c2 = (g c1 + q0) / (2 (2d + 1)).  g is the same in exact
    and approximate mode; q0 is not, since the surrogates expand as
    1/r - xi/2 + ... and 1/r^2 - xi^2/12 + ...
    """
    d = d_param(params.alpha, l)
    ks = params.kinetic_scale
    K = k_value(coupling)
    g = ks * (K - params.ze2)
    v0 = 0.5 * params.xi * params.ze2
    if Mode(mode) is Mode.APPROX:
        v0 += -0.5 * params.xi * K - params.hbar**2 * l * (l + 1) * params.xi**2 / (24.0 * params.mass)
    q0 = ks * (v0 - energy)
    c1 = g / (2.0 * d)
    c2 = (g * c1 + q0) / (2.0 * (2.0 * d + 1.0))

    def poly(r):
        return 1.0 + c1 * r + c2 * r * r

    return 1.0, (r1 / r0) ** d * poly(r1) / poly(r0)


def reduced_q(params: ModelParams, coupling, l: int, energy: float, mode: Mode, r: np.ndarray) -> np.ndarray:
    return params.kinetic_scale * (v_eff(r, params, coupling, l, mode) - energy)


def integrate_radial(
    params: ModelParams,
    coupling,
    l: int,
    energy: float,
    mode: Mode | str = Mode.EXACT,
    grid: RadialGrid | None = None,
) -> RadialSolution:
    """Outward Numerov integration of the regular solution.

    The returned ``u`` has an arbitrary overall scale (u(r_min) ~ r_min^d
    when no rescaling occurred).  Grids with r_min = h get the refined
    start-up of :func:`_outward`.
    """
    mode = Mode(mode)
    grid = grid or RadialGrid.from_step(DEFAULT_STEP, 100.0)
    r = grid.r
    q = reduced_q(params, coupling, l, energy, mode, r)
    d = d_param(params.alpha, l)
    h = grid.h
    if math.isclose(grid.r_min, h, rel_tol=1e-9):
        rf = _fine_radii(h)
        u0, u1 = _series_start(params, coupling, l, energy, mode, rf[0], rf[1])
        u, rescales = _outward(q, reduced_q(params, coupling, l, energy, mode, rf), h, u0, u1)
        u = u / (STARTUP_REFINE**d)  # u(r_min) back to ~1 before the r^d factor
    else:
        u0, u1 = _series_start(params, coupling, l, energy, mode, r[0], r[1])
        u, rescales = _numerov(q, h, u0, u1, RESCALE_THRESHOLD)
    diagnostics = []
    if rescales:
        diagnostics.append(f"rescaled {rescales} time(s) by {1 / RESCALE_THRESHOLD:g}")
        log.info("integrate_radial: %s", diagnostics[-1])
    else:
        # restore the r^d normalization when it is representable
        scale = r[0] ** d
        if scale > 0:
            u = u * scale
    if not np.all(np.isfinite(u)):
        raise GridError("integration produced non-finite values; refine the grid")
    return RadialSolution(grid, u, float(energy), _count_nodes(u, len(u)), diagnostics)


# ------------------------------------------------------------------- shooting


@dataclass
class _Shooter:
    """Precomputed potential on a long uniform grid for repeated shooting."""

    params: ModelParams
    coupling: object
    l: int
    mode: Mode
    h: float
    r: np.ndarray
    vq: np.ndarray  # kinetic_scale * v_eff
    vq_fine: np.ndarray  # same on the start-up grid
    rescales: int = 0

    def classify(self, energy: float, state: int) -> float:
        """Signed score: negative when ``energy`` is below eigenvalue ``state``, positive above."""
        e_q = self.params.kinetic_scale * energy
        allowed = np.nonzero(self.vq < e_q)[0]
        if allowed.size == 0:
            return -math.inf
        m = int(allowed[-1]) + 1
        if m < 2:
            return -math.inf
        k_b = math.sqrt(-e_q) if e_q < 0 else 0.0
        if k_b == 0.0:
            end = len(self.r)
        else:
            end = min(len(self.r), m + int(TAIL_DECAY_LENGTHS / (k_b * self.h)) + 2)
        hf = self.h / STARTUP_REFINE
        u0, u1 = _series_start(self.params, self.coupling, self.l, energy, self.mode, hf, 2.0 * hf)
        q_fine = self.vq_fine - e_q
        if end - m < 4:
            # allowed region reaches the grid end: decide by nodes alone
            u_all, n1 = _outward(self.vq - e_q, q_fine, self.h, u0, u1)
            return math.inf if _count_nodes(u_all, len(u_all)) > state else -math.inf
        q = self.vq[: m + 1] - e_q
        u_out, n1 = _outward(q, q_fine, self.h, u0, u1)
        nodes = _count_nodes(u_out, m + 1)
        if nodes != state:
            return math.inf if nodes > state else -math.inf
        qi = (self.vq[m - 1 : end] - e_q)[::-1].copy()
        # decaying tail start from the local WKB exponent
        k_end = math.sqrt(max(qi[0], 0.0))
        k_next = math.sqrt(max(qi[1], 0.0))
        u_in_rev, n2 = _numerov(qi, self.h, 1.0, math.exp(0.5 * self.h * (k_end + k_next)), RESCALE_THRESHOLD)
        self.rescales += n1 + n2
        u_in = u_in_rev[::-1]  # u_in[j] is at index m - 1 + j
        c = self.h * self.h / 12.0
        f_m = 1.0 - c * q[m]
        w_left = (1.0 - c * q[m - 1]) * u_out[m - 1] / u_out[m]
        w_right = (1.0 - c * qi[-3]) * u_in[2] / u_in[1]
        # difference of log-derivatives (outward - inward), Numerov-consistent
        mismatch = (2.0 * f_m + self.h * self.h * q[m] - w_left - w_right) / self.h
        # mismatch > 0 means the outward solution still bends toward the axis: energy too low
        return -mismatch if mismatch != 0 else 0.0

    def bisect(self, lo: float, hi: float, state: int, tol: float, rtol: float) -> float:
        for _ in range(400):
            mid = 0.5 * (lo + hi)
            if hi - lo <= max(tol * min(1.0, abs(mid)), rtol * abs(mid)) or mid in (lo, hi):
                break
            if self.classify(mid, state) < 0:
                lo = mid
            else:
                hi = mid
        return 0.5 * (lo + hi)


def _make_shooter(params, coupling, l, mode, h, r_cap) -> _Shooter:
    grid = RadialGrid.from_step(h, r_cap)
    r = grid.r
    with np.errstate(over="ignore"):
        vq = params.kinetic_scale * v_eff(r, params, coupling, l, mode)
        vq_fine = params.kinetic_scale * v_eff(_fine_radii(h), params, coupling, l, mode)
    return _Shooter(params, coupling, l, Mode(mode), h, r, vq, vq_fine)


def _shoot(shooter: _Shooter, lo: float, hi: float, max_states: int, tol: float, rtol: float) -> list[float]:
    energies: list[float] = []
    for s in range(max_states):
        if shooter.classify(hi, s) < 0:
            break
        e = shooter.bisect(lo, hi, s, tol, rtol)
        energies.append(e)
        lo = e
    if shooter.rescales:
        log.info("shoot_eigenvalues: %d overflow rescalings", shooter.rescales)
    return energies


def shoot_eigenvalues(
    params: ModelParams,
    coupling,
    l: int,
    mode: Mode | str = Mode.APPROX,
    e_window: tuple[float, float] | None = None,
    max_states: int = 50,
    h: float = DEFAULT_STEP,
    tol: float = 1e-12,
    rtol: float = 1e-13,
    r_cap: float = DEFAULT_R_CAP,
) -> list[float]:
    """Bound-state energies in ``e_window`` by node-bracketed bisection on the matching function.

    The bracket for state s is [previous eigenvalue, window top]; the score
    combines the node count of the outward solution (up to the outer turning
    point) with the log-derivative mismatch there.  ``tol`` is the absolute
    bisection width for |E| >= 1, scaled by |E| below that; ``rtol`` is a
    relative floor.  States above the window top are not reported, so a state
    within the window top of threshold can be missed.

    Returns
    -------
    list of float
        Ascending energies, at most ``max_states``; empty if none lie in the window.
    """
    shooter = _make_shooter(params, coupling, l, mode, h, r_cap)
    e_floor = float(shooter.vq.min() / params.kinetic_scale)
    lo, hi = e_window if e_window is not None else (e_floor, -1e-12)
    lo = max(lo, e_floor)
    if not lo < hi:
        return []
    return _shoot(shooter, lo, hi, max_states, tol, rtol)


def match_residual(
    params: ModelParams,
    coupling,
    l: int,
    energy: float,
    mode: Mode | str = Mode.APPROX,
    h: float = DEFAULT_STEP,
    r_cap: float = DEFAULT_R_CAP,
) -> float:
    """Log-derivative mismatch at the outer turning point, in units of the local decay constant.

    Near zero when ``energy`` is an eigenvalue; the node-count condition is not imposed.
    """
    shooter = _make_shooter(params, coupling, l, mode, h, r_cap)
    e_q = params.kinetic_scale * energy
    k_b = math.sqrt(-e_q)
    for s in range(10_000):
        score = shooter.classify(energy, s)
        if math.isfinite(score):
            return abs(score) / k_b
        if score < 0:
            break
    return math.inf


def approximation_quality(
    params: ModelParams, coupling, l: int, max_states: int = 50, h: float = DEFAULT_STEP
) -> list[tuple[float, float, float]]:
    """Pair exact- and approx-mode eigenvalues: (E_exact, E_approx, relative difference)."""
    exact = shoot_eigenvalues(params, coupling, l, Mode.EXACT, max_states=max_states, h=h)
    approx = shoot_eigenvalues(params, coupling, l, Mode.APPROX, max_states=max_states, h=h)
    return [(e, a, abs(e - a) / abs(a)) for e, a in zip(exact, approx)]


# ---------------------------------------------------------------- phase shift


def extract_phase_shift(
    sol: RadialSolution,
    k: float,
    ell: float,
    fit_fraction: float = 0.25,
    max_residual: float = 1e-4,
) -> float:
    """Fit u ~ A sin(kr - pi ell/2) + B cos(kr - pi ell/2) over the tail of the grid.

    Returns delta = atan2(B, A) reduced to (-pi/2, pi/2], i.e. the phase in
    sin(kr - pi ell/2 + delta), defined modulo pi.

    Raises
    ------
    AsymptoticRegimeError
        If k r_max < 50 or the relative RMS residual of the fit exceeds
        ``max_residual``.
    """
    if not k > 0:
        raise ValueError("k must be > 0")
    r = sol.r
    if k * r[-1] < 50:
        raise AsymptoticRegimeError(f"k r_max = {k * r[-1]:.3g} < 50; increase r_max")
    start = int(len(r) * (1.0 - fit_fraction))
    rr, uu = r[start:], sol.u[start:]
    arg = k * rr - 0.5 * math.pi * ell
    design = np.column_stack([np.sin(arg), np.cos(arg)])
    coef, *_ = np.linalg.lstsq(design, uu, rcond=None)
    resid = uu - design @ coef
    amp = math.hypot(*coef)
    rel = float(np.sqrt(np.mean(resid**2))) / amp
    if not rel <= max_residual:
        raise AsymptoticRegimeError(f"asymptotic fit residual {rel:.3g} exceeds {max_residual:g}; increase r_max")
    delta = math.atan2(coef[1], coef[0])
    w = math.remainder(delta, math.pi)
    return math.pi / 2 if w == -math.pi / 2 else w


def fitted_phase_offset(analytic: np.ndarray, numeric: np.ndarray) -> float:
    """Constant c (mod pi, in (-pi/2, pi/2]) that best aligns analytic - numeric phases."""
    diff = np.asarray(analytic, dtype=float) - np.asarray(numeric, dtype=float)
    # circular mean on the doubled angle handles the mod-pi ambiguity
    z = np.exp(2j * diff).mean()
    c = 0.5 * math.atan2(z.imag, z.real)
    return math.pi / 2 if c == -math.pi / 2 else c


def scattering_solution(
    params: ModelParams,
    coupling,
    l: int,
    energy: float,
    mode: Mode | str = Mode.APPROX,
    h: float = DEFAULT_STEP,
    r_max: float | None = None,
) -> RadialSolution:
    """Outward solution long enough for phase extraction (k r_max >= 50 and xi r_max >= 60)."""
    k = math.sqrt(params.kinetic_scale * energy)
    need = max(60.0 / k, 60.0 / params.xi, 100.0)
    return integrate_radial(params, coupling, l, energy, mode, RadialGrid.from_step(h, r_max or need))
