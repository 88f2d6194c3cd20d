"""Closed-form results of the hypergeometric solution.

Scattering (E > 0) uses the regular solution

    u(y) = y^d (1 - y)^(-i kappa) 2F1(a, b; 2d; y),   y = 1 - exp(-xi r),

whose behaviour at y -> 1 fixes the phase shift.  Bound states (E < 0) come
from three independent routes that must agree: the closed-form energy, the
pole condition of the S-matrix, and termination of the Frobenius series.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate, optimize

from .model import Channel, DerivedChannelParams, ModelParams, derive_channel_params, k_value
from .specfun import GammaPoleError, arg_gamma, hyp2f1, is_nonpositive_integer

POLE_TOL = 1e-12


class NoBoundStateError(ValueError):
    """Requested channel violates n < sqrt(wp^2) - d."""

    def __init__(self, message: str, n_max: int):
        super().__init__(message)
        self.n_max = n_max


# ---------------------------------------------------------------- scattering


@dataclass(frozen=True)
class ScatteringParams:
    """Parameters of the scattering solution at energy E > 0.

    ``delta`` is Delta = sqrt(wp^2 - kappa^2) on the principal branch
    (Im Delta >= 0 when wp^2 < kappa^2).
    """

    energy: float
    k: float
    kappa: float
    delta: complex
    a: complex
    b: complex
    c: float
    d: float
    ell: float
    lambda_sq: float
    wp_sq: float
    xi: float


def wave_number(params: ModelParams, energy: float) -> float:
    """k = sqrt(2 M E) / (alpha hbar)."""
    return math.sqrt(2.0 * params.mass * energy) / (params.alpha * params.hbar)


def scattering_params(params: ModelParams, coupling, l: int, energy: float) -> ScatteringParams:
    if not energy > 0:
        raise ValueError(f"scattering needs E > 0, got {energy}")
    dp = derive_channel_params(params, coupling, l)
    k = wave_number(params, energy)
    kappa = k / params.xi
    delta = cmath.sqrt(complex(dp.wp_sq - kappa * kappa))
    a = dp.d - 1j * kappa + delta
    b = dp.d - 1j * kappa - delta
    return ScatteringParams(
        energy=float(energy),
        k=k,
        kappa=kappa,
        delta=delta,
        a=a,
        b=b,
        c=2.0 * dp.d,
        d=dp.d,
        ell=dp.ell,
        lambda_sq=dp.lambda_sq,
        wp_sq=dp.wp_sq,
        xi=params.xi,
    )


def _check_not_pole(z: complex) -> None:
    n = round(-z.real)
    if n >= 0 and abs(z + n) < POLE_TOL:
        raise GammaPoleError(f"Gamma argument {z} sits on the pole at -{n}: quantization condition met")


def phase_shift(sp: ScatteringParams, ell: float | None = None) -> float:
    """delta_l = pi (ell+1)/2 + arg G(2i kappa) - arg G(d + i kappa - Delta) - arg G(d + i kappa + Delta).

    Arguments come from the continuous log-gamma, so the value is not folded
    into (-pi, pi]; only delta modulo pi is physical.

    With this definition the regular solution behaves as
    sin(k r - pi ell / 2 + delta_l) for large r.
    """
    if sp.kappa == 0:
        raise ValueError("phase shift undefined at kappa = 0")
    ell = sp.ell if ell is None else ell
    z_minus = sp.d + 1j * sp.kappa - sp.delta
    z_plus = sp.d + 1j * sp.kappa + sp.delta
    _check_not_pole(z_minus)
    _check_not_pole(z_plus)
    return (
        0.5 * math.pi * (ell + 1.0)
        + arg_gamma(2j * sp.kappa)
        - arg_gamma(z_minus)
        - arg_gamma(z_plus)
    )


def s_matrix(delta_l: float) -> complex:
    return cmath.exp(2j * delta_l)


def wrap_phase(delta: float) -> float:
    """Reduce a phase modulo pi into (-pi/2, pi/2]."""
    w = math.remainder(delta, math.pi)
    return math.pi / 2 if w == -math.pi / 2 else w


def align_branch(deltas) -> np.ndarray:
    """Remove jumps of multiples of pi between consecutive phase values."""
    return np.unwrap(np.asarray(deltas, dtype=float), period=math.pi)


@dataclass(frozen=True)
class ScatteringResult:
    l: int
    energy: float
    k: float
    kappa: float
    delta_l: float
    s_matrix: complex


def scattering(params: ModelParams, coupling, l: int, energy: float) -> ScatteringResult:
    sp = scattering_params(params, coupling, l, energy)
    delta = phase_shift(sp)
    return ScatteringResult(l, sp.energy, sp.k, sp.kappa, delta, s_matrix(delta))


def scattering_wavefunction(sp: ScatteringParams, r) -> complex:
    """u(r) = (1 - e^{-xi r})^d e^{i k r} 2F1(a, b; 2d; 1 - e^{-xi r}), unit prefactor.

    1 - y is passed to 2F1 as exp(-xi r), so the phase stays accurate at
    large r.  Accuracy of the 2F1 series degrades when kappa is large (tens),
    because the terms grow before they converge.
    """
    r = float(r)
    if r < 0:
        raise ValueError("r must be >= 0")
    if r == 0:
        return 0j
    y = -math.expm1(-sp.xi * r)
    return y**sp.d * cmath.exp(1j * sp.k * r) * hyp2f1(sp.a, sp.b, sp.c, y, one_minus_y=math.exp(-sp.xi * r))


def hypergeometric_ode_residual(sp: ScatteringParams, y: float) -> float:
    """Relative residual of the transformed radial ODE for the assembled u(y).

    Uses exact derivatives of 2F1 (contiguous shifts of the parameters), so
    the residual measures the solution itself, not a finite-difference error.
    """
    a, b, c = sp.a, sp.b, sp.c
    f0 = hyp2f1(a, b, c, y)
    f1 = a * b / c * hyp2f1(a + 1, b + 1, c + 1, y)
    f2 = a * (a + 1) * b * (b + 1) / (c * (c + 1)) * hyp2f1(a + 2, b + 2, c + 2, y)
    mu = -1j * sp.kappa
    g = y**sp.d * (1 - y) ** mu
    lg1 = sp.d / y - mu / (1 - y)
    lg2 = lg1 * lg1 - sp.d / y**2 - mu / (1 - y) ** 2
    u = g * f0
    du = g * (lg1 * f0 + f1)
    d2u = g * (lg2 * f0 + 2 * lg1 * f1 + f2)
    terms = (
        (1 - y) ** 2 * d2u,
        -(1 - y) * du,
        -sp.lambda_sq * (1 - y) / y**2 * u,
        sp.wp_sq * (1 - y) / y * u,
        sp.kappa**2 * u,
    )
    return abs(sum(terms)) / sum(abs(t) for t in terms)


# --------------------------------------------------------------- bound states


def _l(channel) -> int:
    return channel.l if isinstance(channel, Channel) else int(channel)


def energy_formula(dp: DerivedChannelParams, n: int) -> float:
    """-(d+n-wp)^2 (d+n+wp)^2 / (beta (d+n)^2), evaluated without admissibility checks."""
    m = dp.d + n
    return -((m * m - dp.wp_sq) ** 2) / (dp.beta * m * m)


def explicit_energy(params: ModelParams, coupling, channel: Channel) -> float:
    """Fully expanded energy expression in terms of the raw parameters (no admissibility check)."""
    M, hbar, alpha, xi = params.mass, params.hbar, params.alpha, params.xi
    K = k_value(coupling)
    l, n = channel.l, channel.n
    shifted = n + math.sqrt(4 * l * (l + 1) + alpha**2) / (2 * alpha) + 0.5
    bracket = (2 * M * xi / (hbar**2 * alpha**2 * xi**2)) * (params.ze2 - K) / shifted - shifted
    return -(alpha**2 * hbar**2 * xi**2) / (8 * M) * bracket**2


def xi_limit_energy(params: ModelParams, coupling, channel: Channel) -> float:
    """xi -> 0 limit: -M (Z e^2 - K)^2 / (2 hbar^2 alpha^2 (n+d)^2)."""
    dp = derive_channel_params(params, coupling, channel)
    m = channel.n + dp.d
    return -params.mass * (params.ze2 - k_value(coupling)) ** 2 / (2 * params.hbar**2 * params.alpha**2 * m * m)


def textbook_energy(params: ModelParams, channel: Channel) -> float:
    """Flat-space (alpha = 1, K = 0) Hulthen levels.

    E = -(hbar^2 xi^2 / 2M) [ (2 M Z e^2 / (hbar^2 xi)) / (2(n+l+1)) - (n+l+1)/2 ]^2
    """
    M, hbar, xi = params.mass, params.hbar, params.xi
    N = channel.n + channel.l + 1
    bracket = (2 * M * params.ze2 / (hbar**2 * xi)) / (2 * N) - N / 2
    return -(hbar**2 * xi**2) / (2 * M) * bracket**2


def bound_state_count(params: ModelParams, coupling, l: int) -> int:
    """Number of n >= 0 with n < sqrt(wp^2) - d (zero if wp^2 <= 0)."""
    dp = derive_channel_params(params, coupling, l)
    if dp.wp_sq <= 0:
        return 0
    bound = math.sqrt(dp.wp_sq) - dp.d
    return max(0, math.ceil(bound))


def is_admissible(dp: DerivedChannelParams, n: int) -> bool:
    return dp.wp_sq > (dp.d + n) ** 2


def _require_bound(params: ModelParams, coupling, channel: Channel) -> DerivedChannelParams:
    dp = derive_channel_params(params, coupling, channel)
    if not is_admissible(dp, channel.n):
        n_max = bound_state_count(params, coupling, channel.l)
        raise NoBoundStateError(
            f"no bound state for n={channel.n}, l={channel.l}: need wp^2 > (d+n)^2 "
            f"(wp^2={dp.wp_sq:.6g}, d+n={dp.d + channel.n:.6g}); {n_max} state(s) in this channel",
            n_max,
        )
    return dp


def bound_energy(params: ModelParams, coupling, channel: Channel) -> float:
    """Closed-form bound-state energy E_nl (< 0).

    Raises
    ------
    NoBoundStateError
        When n >= sqrt(wp^2) - d; carries ``n_max``.
    """
    dp = _require_bound(params, coupling, channel)
    return energy_formula(dp, channel.n)


def energy_from_kappa_b(params: ModelParams, kappa_b: float) -> float:
    """Invert kappa_b = sqrt(-2 M E / (hbar^2 alpha^2 xi^2))."""
    return -(params.hbar * params.alpha * params.xi * kappa_b) ** 2 / (2.0 * params.mass)


def kappa_b_from_energy(params: ModelParams, energy: float) -> float:
    if energy >= 0:
        raise ValueError("bound-state energy must be negative")
    return math.sqrt(-2.0 * params.mass * energy) / (params.hbar * params.alpha * params.xi)


def kappa_b_closed_form(dp: DerivedChannelParams, n: int) -> float:
    """kappa_b = (wp^2 - (d+n)^2) / (2 (n+d))."""
    m = dp.d + n
    return (dp.wp_sq - m * m) / (2.0 * m)


def _expanding_root(f: Callable[[float], float], start: float = 1.0) -> float:
    """Root of f on (0, inf) with f(0) < 0 < f(inf)."""
    hi = start
    while f(hi) <= 0:
        hi *= 2.0
        if hi > 1e300:
            raise ArithmeticError("failed to bracket root")
    return optimize.brentq(f, 0.0, hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=500)


def pole_condition(dp: DerivedChannelParams, n: int, kappa: complex) -> complex:
    """d + i kappa - Delta(kappa) + n; zero at a pole of Gamma(d + i kappa - Delta)."""
    return dp.d + 1j * kappa - cmath.sqrt(dp.wp_sq - kappa * kappa) + n


def bound_energy_via_smatrix_pole(params: ModelParams, coupling, channel: Channel) -> float:
    """Energy from the Gamma-pole condition d + i kappa - Delta = -n.

    The decaying bound solution corresponds to kappa on the imaginary axis
    with i kappa = +kappa_b, i.e. kappa = -i kappa_b; there
    Delta = sqrt(wp^2 + kappa_b^2) and the condition is real.
    """
    dp = _require_bound(params, coupling, channel)
    n = channel.n
    kappa_b = _expanding_root(lambda kb: pole_condition(dp, n, -1j * kb).real, max(1.0, dp.d))
    return energy_from_kappa_b(params, kappa_b)


# ------------------------------------------------------------------ Frobenius


@dataclass(frozen=True)
class FrobeniusSolution:
    """Series solution h(y) = sum a_s y^s about y = 0 (indicial root 0).

    ``coefficients`` holds a_0 .. a_{n+1} with a_0 = 1; ``residual`` is
    |a_{n+1}| / max_{s<=n} |a_s|.
    """

    zeta1: float
    zeta2: float
    zeta3: float
    gamma: float
    nu: float
    coefficients: tuple[float, ...]
    residual: float

    @property
    def terminated(self) -> bool:
        return self.residual < 1e-10


def frobenius_zetas(dp: DerivedChannelParams, kappa_b: float) -> tuple[float, float, float]:
    gamma1, nu1 = dp.d, kappa_b
    root = math.sqrt(dp.wp_sq + nu1 * nu1)
    return gamma1 + nu1 + root, gamma1 + nu1 - root, 2.0 * gamma1


def frobenius_solve(params: ModelParams, coupling, channel: Channel, energy: float) -> FrobeniusSolution:
    """Build the Frobenius coefficients at a trial (negative) energy.

    a_{s+1} = [s (s + z1 + z2) + z1 z2] / [(s+1)(s + z3)] a_s  with indicial root c = 0.
    """
    dp = derive_channel_params(params, coupling, channel)
    kb = kappa_b_from_energy(params, energy)
    z1, z2, z3 = frobenius_zetas(dp, kb)
    coeffs = [1.0]
    for s in range(channel.n + 1):
        coeffs.append(coeffs[-1] * (s * (s + z1 + z2) + z1 * z2) / ((s + 1) * (s + z3)))
    scale = max(abs(x) for x in coeffs[:-1])
    return FrobeniusSolution(z1, z2, z3, dp.d, kb, tuple(coeffs), abs(coeffs[-1]) / scale)


def frobenius_energy(params: ModelParams, coupling, channel: Channel) -> float:
    """Energy at which the Frobenius series terminates at degree n.

    Solves n (n + z1 + z2) + z1 z2 = 0 (the numerator that kills a_{n+1}) for
    kappa_b > 0.
    """
    dp = _require_bound(params, coupling, channel)
    n = channel.n

    def numerator(kb: float) -> float:
        z1, z2, _ = frobenius_zetas(dp, kb)
        return n * (n + z1 + z2) + z1 * z2

    return energy_from_kappa_b(params, _expanding_root(numerator, max(1.0, dp.d)))


# -------------------------------------------------------------- wavefunction


@dataclass(frozen=True)
class BoundState:
    """Quantized bound state with a normalized radial function u(r).

    u(r) = C (1 - e^{-xi r})^d e^{-kappa_b xi r} 2F1(-n, z1; 2d; 1 - e^{-xi r}),
    z1 = d + kappa_b + sqrt(wp^2 + kappa_b^2).  C is fixed so that the
    integral of u^2 over (0, inf) is 1.
    """

    channel: Channel
    energy: float
    kappa_b: float
    d: float
    wp_sq: float
    xi: float
    zeta1: float
    norm: float = 1.0

    def polynomial_coefficients(self) -> np.ndarray:
        n = self.channel.n
        coeffs = np.empty(n + 1)
        coeffs[0] = 1.0
        for s in range(n):
            coeffs[s + 1] = coeffs[s] * (s - n) * (self.zeta1 + s) / ((2 * self.d + s) * (s + 1))
        return coeffs

    def unnormalized(self, r) -> np.ndarray:
        r = np.asarray(r, dtype=float)
        if np.any(r < 0):
            raise ValueError("r must be >= 0")
        y = -np.expm1(-self.xi * r)
        poly = np.polynomial.polynomial.polyval(y, self.polynomial_coefficients())
        return y**self.d * np.exp(-self.kappa_b * self.xi * r) * poly

    def __call__(self, r):
        out = self.norm * self.unnormalized(r)
        return out if np.ndim(out) else float(out)

    def extent(self) -> float:
        """A radius beyond which u^2 is below 1e-32 of its peak."""
        k_b = self.kappa_b * self.xi
        r = 10.0 / self.xi + 40.0 / k_b
        coarse = np.linspace(0.0, r, 4001)
        u2 = self.unnormalized(coarse) ** 2
        peak = u2.max()
        while u2[-1] > 1e-32 * peak:
            r *= 1.5
            coarse = np.linspace(0.0, r, 4001)
            u2 = self.unnormalized(coarse) ** 2
            peak = u2.max()
        return r


def _norm_integral(state: BoundState, segments: int = 64) -> float:
    edges = np.linspace(0.0, state.extent(), segments + 1)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        val, _ = integrate.quad(lambda r: state.unnormalized(r) ** 2, lo, hi, epsabs=1e-14, epsrel=1e-12, limit=200)
        total += val
    return total


def bound_state(params: ModelParams, coupling, channel: Channel, normalize: bool = True) -> BoundState:
    dp = _require_bound(params, coupling, channel)
    energy = energy_formula(dp, channel.n)
    kb = kappa_b_closed_form(dp, channel.n)
    z1 = dp.d + kb + math.sqrt(dp.wp_sq + kb * kb)
    state = BoundState(channel, energy, kb, dp.d, dp.wp_sq, params.xi, z1)
    if normalize:
        state = BoundState(channel, energy, kb, dp.d, dp.wp_sq, params.xi, z1, 1.0 / math.sqrt(_norm_integral(state)))
    return state


def bound_wavefunction(bs: BoundState, r):
    """Evaluate the normalized bound radial function u(r)."""
    return bs(r)


def node_count(values) -> int:
    """Sign changes of a sampled function, ignoring exact zeros."""
    v = np.asarray(values, dtype=float)
    s = np.sign(v[v != 0])
    return int(np.count_nonzero(s[1:] != s[:-1]))


__all__ = [
    "BoundState",
    "FrobeniusSolution",
    "NoBoundStateError",
    "ScatteringParams",
    "ScatteringResult",
    "align_branch",
    "bound_energy",
    "bound_energy_via_smatrix_pole",
    "bound_state",
    "bound_state_count",
    "bound_wavefunction",
    "energy_formula",
    "explicit_energy",
    "frobenius_energy",
    "frobenius_solve",
    "hypergeometric_ode_residual",
    "is_nonpositive_integer",
    "node_count",
    "phase_shift",
    "s_matrix",
    "scattering",
    "scattering_params",
    "scattering_wavefunction",
    "textbook_energy",
    "wrap_phase",
    "xi_limit_energy",
]
