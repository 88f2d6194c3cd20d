import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hulthen_monopole.model import ModelParams
from hulthen_monopole.monopole import SelfInteractionCoupling, coupling_k
from hulthen_monopole.potentials import (
    Mode,
    RangeError,
    centrifugal,
    effective_potential,
    hulthen,
    inverse_r2_approx,
    inverse_r_approx,
    scan,
    self_interaction,
    v_eff,
)
from hulthen_monopole.presets import get_preset
from hulthen_monopole.reports import scan_from_preset


@given(st.floats(0.2, 2.0), st.floats(0.01, 1.0), st.integers(0, 4), st.floats(1e-3, 100.0))
def test_additivity(alpha, xi, l, r):
    p = ModelParams(alpha=alpha, xi=xi)
    c = coupling_k(alpha)
    for mode in Mode:
        s = effective_potential(r, p, c, l, mode)
        assert s.v_eff == pytest.approx(s.v_hulthen + s.v_self + s.v_centrifugal, rel=1e-14, abs=1e-300)


def test_coulomb_limit_at_small_r():
    p = ModelParams(alpha=0.7, xi=0.1)
    c = coupling_k(0.7)
    r = 1e-7
    assert r * hulthen(r, p) == pytest.approx(-p.ze2, rel=1e-6)
    s = effective_potential(r, p, c, 0)
    assert r * s.v_eff == pytest.approx(c.k_alpha - p.ze2, rel=1e-6)


def test_hulthen_midpoint_value():
    # at xi r = ln 2 the Hulthen factor e^{-x}/(1-e^{-x}) equals one
    p = ModelParams(xi=0.3, Z=2.0)
    assert hulthen(math.log(2) / 0.3, p) == pytest.approx(-2.0 * 0.3, rel=1e-14)


def test_surrogates_agree_near_origin():
    xi = 0.2
    r = 0.01 / xi
    assert inverse_r_approx(r, xi) * r == pytest.approx(1.0, rel=0.01)
    assert inverse_r2_approx(r, xi) * r * r == pytest.approx(1.0, rel=0.01)
    p = ModelParams(xi=xi)
    exact = centrifugal(r, p, 2)
    approx = centrifugal(r, p, 2, Mode.APPROX)
    assert abs(approx - exact) / exact < 0.01


def test_surrogates_do_not_overflow():
    assert inverse_r_approx(1e5, 1.0) == 0.0
    assert inverse_r2_approx(1e5, 1.0) == 0.0


def test_self_interaction_modes():
    p = ModelParams(xi=0.5)
    c = SelfInteractionCoupling.fixed(0.3)
    assert self_interaction(2.0, c) == pytest.approx(0.15)
    assert self_interaction(2.0, c, p, Mode.APPROX) == pytest.approx(0.3 * 0.5 / math.expm1(1.0))
    with pytest.raises(ValueError):
        self_interaction(2.0, c, None, "approx")


def test_alpha_one_has_no_self_interaction():
    p = ModelParams(alpha=1.0)
    s = effective_potential(1.0, p, coupling_k(1.0), 0)
    assert s.v_self == 0.0


def test_v_eff_array_shape():
    p = ModelParams()
    out = v_eff(np.linspace(0.1, 2, 7), p, coupling_k(1.0), 1)
    assert out.shape == (7,)


@pytest.mark.parametrize("bad", [0.0, -1.0, math.nan])
def test_rejects_non_positive_radius(bad):
    with pytest.raises(RangeError):
        hulthen(bad, ModelParams())
    with pytest.raises(RangeError):
        v_eff(np.array([1.0, bad]), ModelParams(), coupling_k(1.0), 0)


def test_scan_grid_and_validation():
    p = ModelParams()
    c = coupling_k(1.0)
    two = scan(p, c, 0, r_min=0.5, r_max=2.0, n_points=2)
    assert list(two.r) == [0.5, 2.0]
    assert len(scan(p, c, 0, n_points=11, spacing="uniform")) == 11
    for kwargs in ({"n_points": 1}, {"r_min": 2.0, "r_max": 1.0}, {"r_min": 0.0}, {"spacing": "cubic"}):
        with pytest.raises(RangeError):
            scan(p, c, 0, **kwargs)


def test_scan_samples_roundtrip():
    s = scan(ModelParams(alpha=0.7), coupling_k(0.7), 1, n_points=5)
    rows = s.samples()
    assert len(rows) == 5 and rows[2].r == s.r[2] and rows[2].v_eff == s.v_eff[2]


def _wells(name: str) -> dict[float, bool]:
    table = scan_from_preset(get_preset(name))
    alphas = np.asarray(table.column("alpha"))
    v = np.asarray(table.column("v_eff"))
    out = {}
    for a in np.unique(alphas):
        vv = v[alphas == a]
        i = int(np.argmin(vv))
        out[float(a)] = bool(vv[i] < 0 and 0 < i < len(vv) - 1)
    return out


def test_strong_well_panel_has_wells_for_all_alpha():
    assert all(_wells("fig1a").values())


def test_weak_high_l_panel_has_no_wells():
    assert not any(_wells("fig1d").values())


def test_additivity_column_is_tiny():
    table = scan_from_preset(get_preset("fig2a"))
    assert max(table.column("additivity_error")) < 1e-12
