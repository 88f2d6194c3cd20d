"""Physical parameters, quantum-number channels and derived dimensionless quantities."""

from __future__ import annotations

import math
from dataclasses import dataclass


class ParameterError(ValueError):
    """Raised for inadmissible physical parameters or quantum numbers."""


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the Hulthen + self-interaction problem.

    Defaults follow the unit system hbar = M = e = 1.  ``alpha`` is the
    deficit parameter of the monopole metric (alpha**2 = 1 - 8 pi G eta**2)
    and ``xi`` the Hulthen screening parameter.
    """

    alpha: float = 1.0
    xi: float = 0.1
    Z: float = 1.0
    mass: float = 1.0
    hbar: float = 1.0
    charge: float = 1.0

    def __post_init__(self) -> None:
        for name in ("alpha", "xi", "mass", "hbar"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise ParameterError(f"{name} must be finite and > 0, got {value!r}")
        # Z = 0 switches the Hulthen term off (free-field checks)
        if not (math.isfinite(self.Z) and self.Z >= 0):
            raise ParameterError(f"Z must be finite and >= 0, got {self.Z!r}")
        if not math.isfinite(self.charge):
            raise ParameterError(f"charge must be finite, got {self.charge!r}")

    @property
    def ze2(self) -> float:
        """Hulthen strength Z e**2."""
        return self.Z * self.charge**2

    @property
    def kinetic_scale(self) -> float:
        """2M / (hbar**2 alpha**2): converts energies into the reduced ODE."""
        return 2.0 * self.mass / (self.hbar**2 * self.alpha**2)

    def replace(self, **changes) -> "ModelParams":
        data = {**self.__dict__, **changes}
        return ModelParams(**data)


@dataclass(frozen=True)
class Channel:
    """Radial index ``n`` and orbital angular momentum ``l``."""

    n: int = 0
    l: int = 0

    def __post_init__(self) -> None:
        for name in ("n", "l"):
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, int) or value < 0:
                raise ParameterError(f"{name} must be a non-negative integer, got {value!r}")


@dataclass(frozen=True)
class DerivedChannelParams:
    lambda_sq: float
    d: float
    ell: float
    wp_sq: float
    beta: float


def lambda_squared(alpha: float, l: int) -> float:
    return l * (l + 1) / alpha**2


def d_param(alpha: float, l: int) -> float:
    """Regular-solution exponent d = (1 + sqrt(1 + 4 lambda^2)) / 2."""
    return 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * lambda_squared(alpha, l)))


def ell_param(alpha: float, l: int) -> float:
    """Effective angular momentum sqrt(4l^2 + 4l + alpha^2) / (2 alpha); equals d - 1/2."""
    return math.sqrt(4 * l * l + 4 * l + alpha * alpha) / (2.0 * alpha)


def wp_squared(params: ModelParams, k_alpha: float) -> float:
    """Dimensionless coupling 2M (Z e^2 - K) / (hbar^2 alpha^2 xi).

    Negative when the self-interaction overcomes the Hulthen attraction.
    """
    return params.kinetic_scale * (params.ze2 - k_alpha) / params.xi


def beta_param(params: ModelParams) -> float:
    return 8.0 * params.mass / (params.alpha**2 * params.hbar**2 * params.xi**2)


def k_value(coupling) -> float:
    """Accept either a coupling record (anything with ``k_alpha``) or a bare number."""
    return float(getattr(coupling, "k_alpha", coupling))


def derive_channel_params(params: ModelParams, coupling, channel: Channel | int) -> DerivedChannelParams:
    """Compute the dimensionless quantities entering the hypergeometric solution.

    Parameters
    ----------
    params : ModelParams
    coupling : SelfInteractionCoupling or float
        Self-interaction coupling K(alpha); see :func:`hulthen_monopole.monopole.coupling_k`.
    channel : Channel or int
        Channel (only ``l`` is used) or the bare orbital quantum number.
    """
    l = channel.l if isinstance(channel, Channel) else int(channel)
    if l < 0:
        raise ParameterError(f"l must be >= 0, got {l}")
    return DerivedChannelParams(
        lambda_sq=lambda_squared(params.alpha, l),
        d=d_param(params.alpha, l),
        ell=ell_param(params.alpha, l),
        wp_sq=wp_squared(params, k_value(coupling)),
        beta=beta_param(params),
    )
