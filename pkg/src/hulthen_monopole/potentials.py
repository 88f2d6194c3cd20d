"""Hulthen, self-interaction and centrifugal terms, exact and exponentially approximated."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .model import Channel, ModelParams, k_value


class Mode(str, Enum):
    EXACT = "exact"
    APPROX = "approx"


class RangeError(ValueError):
    """Non-positive radius or invalid scan range."""


def _radius(r) -> np.ndarray:
    r = np.asarray(r, dtype=float)
    if np.any(~(r > 0)):
        raise RangeError("r must be > 0")
    return r


def inverse_r_approx(r, xi: float) -> np.ndarray:
    """xi e^{-xi r} / (1 - e^{-xi r}) written as xi / expm1(xi r)."""
    with np.errstate(over="ignore"):
        return xi / np.expm1(xi * np.asarray(r, dtype=float))


def inverse_r2_approx(r, xi: float) -> np.ndarray:
    """xi^2 e^{-xi r} / (1 - e^{-xi r})^2 written as xi^2 / (4 sinh^2(xi r / 2))."""
    with np.errstate(over="ignore"):
        s = np.sinh(0.5 * xi * np.asarray(r, dtype=float))
        return xi * xi / (4.0 * s * s)


def hulthen(r, params: ModelParams):
    """V_H(r) = -Z e^2 xi e^{-xi r} / (1 - e^{-xi r})."""
    r = _radius(r)
    out = -params.ze2 * inverse_r_approx(r, params.xi)
    return out if out.ndim else float(out)


def self_interaction(r, coupling, params: ModelParams | None = None, mode: Mode | str = Mode.EXACT):
    """K(alpha)/r, or K xi e^{-xi r}/(1 - e^{-xi r}) in approximate mode (needs ``params``)."""
    r = _radius(r)
    k = k_value(coupling)
    if Mode(mode) is Mode.APPROX:
        if params is None:
            raise ValueError("approximate mode needs params for xi")
        out = k * inverse_r_approx(r, params.xi)
    else:
        out = k / r
    return out if out.ndim else float(out)


def centrifugal(r, params: ModelParams, l: int, mode: Mode | str = Mode.EXACT):
    """hbar^2 l(l+1) / (2 M r^2), with 1/r^2 replaced by its exponential surrogate in approx mode."""
    r = _radius(r)
    pref = params.hbar**2 * l * (l + 1) / (2.0 * params.mass)
    if Mode(mode) is Mode.APPROX:
        out = pref * inverse_r2_approx(r, params.xi)
    else:
        out = pref / (r * r)
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class PotentialSample:
    r: float
    v_hulthen: float
    v_self: float
    v_centrifugal: float
    v_eff: float


def _l_of(channel) -> int:
    return channel.l if isinstance(channel, Channel) else int(channel)


def effective_potential(r, params: ModelParams, coupling, channel, mode: Mode | str = Mode.EXACT):
    """Return the three-term decomposition of V_eff at ``r``.

    Scalar ``r`` gives a :class:`PotentialSample`; an array gives a tuple of
    arrays ``(v_hulthen, v_self, v_centrifugal, v_eff)``.
    """
    l = _l_of(channel)
    scalar = np.ndim(r) == 0
    rr = _radius(np.atleast_1d(r))
    vh = -params.ze2 * inverse_r_approx(rr, params.xi)
    vs = np.asarray(self_interaction(rr, coupling, params, mode))
    vc = np.asarray(centrifugal(rr, params, l, mode))
    veff = vh + vs + vc
    if scalar:
        return PotentialSample(float(rr[0]), float(vh[0]), float(vs[0]), float(vc[0]), float(veff[0]))
    return vh, vs, vc, veff


def v_eff(r, params: ModelParams, coupling, l: int, mode: Mode | str = Mode.EXACT) -> np.ndarray:
    """Array-valued V_eff(r) (no decomposition)."""
    return effective_potential(np.atleast_1d(r), params, coupling, l, mode)[3]


@dataclass(frozen=True)
class PotentialScan:
    r: np.ndarray
    v_hulthen: np.ndarray
    v_self: np.ndarray
    v_centrifugal: np.ndarray
    v_eff: np.ndarray
    params: ModelParams
    l: int
    mode: Mode
    k_alpha: float = field(default=0.0)

    def __len__(self) -> int:
        return len(self.r)

    def samples(self) -> list[PotentialSample]:
        return [
            PotentialSample(*map(float, row))
            for row in zip(self.r, self.v_hulthen, self.v_self, self.v_centrifugal, self.v_eff)
        ]

    def local_minima(self) -> list[int]:
        """Indices of interior strict local minima of v_eff."""
        v = self.v_eff
        return [i for i in range(1, len(v) - 1) if v[i] < v[i - 1] and v[i] <= v[i + 1]]

    def has_bound_well(self) -> bool:
        """True iff the global minimum of v_eff is negative and lies in the interior."""
        i = int(np.argmin(self.v_eff))
        return bool(self.v_eff[i] < 0 and 0 < i < len(self.v_eff) - 1)


def scan(
    params: ModelParams,
    coupling,
    channel,
    mode: Mode | str = Mode.EXACT,
    r_min: float = 1e-3,
    r_max: float = 60.0,
    n_points: int = 2000,
    spacing: str = "log",
) -> PotentialScan:
    """Tabulate the effective potential on a log- or uniformly spaced grid."""
    if not (0 < r_min < r_max) or not np.isfinite(r_max):
        raise RangeError(f"need 0 < r_min < r_max, got {r_min}, {r_max}")
    if n_points < 2:
        raise RangeError("n_points must be >= 2")
    if spacing == "log":
        r = np.geomspace(r_min, r_max, n_points)
    elif spacing == "uniform":
        r = np.linspace(r_min, r_max, n_points)
    else:
        raise RangeError(f"unknown spacing {spacing!r}")
    r[0], r[-1] = r_min, r_max
    vh, vs, vc, veff = effective_potential(r, params, coupling, channel, mode)
    return PotentialScan(r, vh, vs, vc, veff, params, _l_of(channel), Mode(mode), k_value(coupling))
