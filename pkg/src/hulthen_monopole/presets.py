"""Named parameter sets for the published table and figures.

All figure presets live here so that a change in caption interpretation is a
one-line, reviewable edit.  Unless stated, hbar = M = Z = e = 1.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np


@dataclass(frozen=True)
class EnergyPreset:
    """Energies E_nl over a grid of (alpha, xi, l, n)."""

    name: str
    caption: str
    alphas: tuple[float, ...]
    xis: tuple[float, ...]
    ls: tuple[int, ...]
    ns: tuple[int, ...]
    xi_limit: bool = False
    # published reference values keyed by (n, l)
    published: dict[tuple[int, int], float] = field(default_factory=dict)


@dataclass(frozen=True)
class ScanPreset:
    """Effective-potential curves V_eff(r) for several alpha at fixed (xi, l)."""

    name: str
    caption: str
    alphas: tuple[float, ...]
    xi: float
    l: int
    r_min: float = 0.05
    r_max: float = 60.0
    n_points: int = 2000
    mode: str = "exact"


@dataclass(frozen=True)
class WavefunctionPreset:
    """Normalized bound radial functions for n = 1..5 at fixed (alpha, xi, l)."""

    name: str
    caption: str
    alpha: float
    xi: float
    l: int = 1
    ns: tuple[int, ...] = (1, 2, 3, 4, 5)
    n_points: int = 20001


TABLE1_PUBLISHED: dict[tuple[int, int], float] = {
    (1, 1): -0.0472842,
    (1, 2): -0.0236029,
    (1, 3): -0.0141781,
    (1, 4): -0.0094620,
    (1, 5): -0.0067639,
    (1, 6): -0.0050758,
    (1, 7): -0.0039496,
    (1, 8): -0.0031608,
    (1, 9): -0.0025868,
    (1, 10): -0.0021561,
}

# Alpha values are not given in the figure captions.  For alpha < 1 the set
# is chosen so that the xi = 0.1, l = 1 panel has a well for every curve
# (alpha = 0.4 has none); for alpha > 1 it spans the plotted regime.
FIG1_ALPHAS = (0.5, 0.6, 0.7, 0.8, 0.9)
FIG2_ALPHAS = (1.2, 1.5, 1.8)
FIG5_ALPHAS_ABOVE = (1.2, 1.4, 1.6, 1.8)
FIG5_ALPHAS_BELOW = (0.6, 0.7, 0.8, 0.9)

_PANELS = {"a": (0.1, 1), "b": (0.65, 1), "c": (0.21, 2), "d": (0.65, 3)}

PRESETS: dict[str, EnergyPreset | ScanPreset | WavefunctionPreset] = {
    "table1": EnergyPreset(
        "table1",
        "Energies in the limit xi -> 0 for n = 1, l = 1..10, alpha = 0.7",
        alphas=(0.7,),
        xis=(0.1,),
        ls=tuple(range(1, 11)),
        ns=(1,),
        xi_limit=True,
        published=TABLE1_PUBLISHED,
    ),
}

for _panel, (_xi, _l) in _PANELS.items():
    PRESETS[f"fig1{_panel}"] = ScanPreset(
        f"fig1{_panel}", f"V_eff(r), alpha < 1, xi = {_xi}, l = {_l}", FIG1_ALPHAS, _xi, _l
    )
    PRESETS[f"fig2{_panel}"] = ScanPreset(
        f"fig2{_panel}", f"V_eff(r), alpha > 1, xi = {_xi}, l = {_l}", FIG2_ALPHAS, _xi, _l, r_max=400.0, n_points=4000
    )

for _name, (_alpha, _xi) in {
    "fig3a": (0.2, 0.1),
    "fig3b": (0.8, 0.1),
    "fig3c": (0.2, 0.65),
    "fig3d": (0.8, 0.65),
    "fig4a": (1.2, 0.1),
    "fig4b": (1.8, 0.1),
    "fig4c": (1.2, 0.65),
    "fig4d": (1.8, 0.65),
}.items():
    PRESETS[_name] = WavefunctionPreset(_name, f"|u(r)|^2, alpha = {_alpha}, xi = {_xi}, l = 1, n = 1..5", _alpha, _xi)

PRESETS["fig5a"] = EnergyPreset(
    "fig5a", "E_1l versus l, xi = 0.1, alpha > 1", FIG5_ALPHAS_ABOVE, (0.1,), tuple(range(0, 7)), (1,)
)
PRESETS["fig5b"] = EnergyPreset(
    "fig5b", "E_1l versus l, xi = 0.1, alpha < 1", FIG5_ALPHAS_BELOW, (0.1,), tuple(range(0, 7)), (1,)
)
_ALPHA_GRID = tuple(float(a) for a in np.round(np.arange(0.5, 2.0001, 0.05), 2))
PRESETS["fig6a"] = EnergyPreset("fig6a", "E_1l versus alpha, xi = 0.01", _ALPHA_GRID, (0.01,), (0, 1, 2), (1,))
PRESETS["fig6b"] = EnergyPreset("fig6b", "E_1l versus alpha, xi = 0.5", _ALPHA_GRID, (0.5,), (0, 1, 2), (1,))
PRESETS["fig7a"] = EnergyPreset(
    "fig7a",
    "E_1l versus xi, alpha = 1.5",
    (1.5,),
    tuple(float(x) for x in np.round(np.arange(0.005, 0.1001, 0.005), 3)),
    (0, 1, 2, 3, 4),
    (1,),
)
PRESETS["fig7b"] = EnergyPreset(
    "fig7b",
    "E_1l versus xi up to 0.5, alpha = 1.5",
    (1.5,),
    tuple(float(x) for x in np.round(np.arange(0.01, 0.5001, 0.01), 2)),
    (0, 1, 2, 3, 4),
    (1,),
)


def get_preset(name: str):
    try:
        return PRESETS[name]
    except KeyError:
        raise KeyError(f"unknown preset {name!r}; known: {', '.join(sorted(PRESETS))}") from None
