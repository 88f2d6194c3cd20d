import math

import pytest
from hypothesis import given, strategies as st

from hulthen_monopole.model import (
    Channel,
    ModelParams,
    ParameterError,
    beta_param,
    d_param,
    derive_channel_params,
    ell_param,
    lambda_squared,
    wp_squared,
)


@pytest.mark.parametrize("field", ["alpha", "xi", "mass", "hbar"])
@pytest.mark.parametrize("value", [0.0, -1.0, math.nan, math.inf])
def test_rejects_nonpositive(field, value):
    with pytest.raises(ParameterError):
        ModelParams(**{field: value})


def test_defaults_are_unit_system():
    p = ModelParams()
    assert (p.mass, p.hbar, p.charge, p.Z) == (1.0, 1.0, 1.0, 1.0)
    assert p.kinetic_scale == 2.0


def test_both_alpha_regimes_allowed():
    ModelParams(alpha=0.3)
    ModelParams(alpha=1.8)


@pytest.mark.parametrize("n,l", [(-1, 0), (0, -2), (0.5, 1), (True, 0)])
def test_channel_validation(n, l):
    with pytest.raises(ParameterError):
        Channel(n, l)


def test_ell_reduces_to_l_plus_half_at_alpha_one():
    for l in range(21):
        assert ell_param(1.0, l) == pytest.approx(l + 0.5, rel=1e-15)


@given(st.floats(0.05, 3.0), st.integers(0, 30))
def test_d_equals_ell_plus_half(alpha, l):
    assert d_param(alpha, l) == pytest.approx(ell_param(alpha, l) + 0.5, rel=1e-12)
    # regular exponent solves d(d-1) = lambda^2
    d = d_param(alpha, l)
    assert d * (d - 1) == pytest.approx(lambda_squared(alpha, l), rel=1e-10, abs=1e-12)


@given(st.floats(0.05, 3.0), st.floats(1e-3, 5.0))
def test_beta_positive(alpha, xi):
    assert beta_param(ModelParams(alpha=alpha, xi=xi)) > 0


def test_wp_squared_sign_change_at_balance():
    p = ModelParams(alpha=0.7, xi=0.1)
    assert wp_squared(p, 1.0) == 0.0
    assert wp_squared(p, 0.99) > 0 > wp_squared(p, 1.01)


def test_derived_bundle():
    p = ModelParams(alpha=0.8, xi=0.2)
    dp = derive_channel_params(p, 0.1, Channel(2, 1))
    assert dp.lambda_sq == pytest.approx(2 / 0.64)
    assert dp.wp_sq == pytest.approx(2 * 0.9 / (0.64 * 0.2))
    assert dp.beta == pytest.approx(8 / (0.64 * 0.04))


def test_replace_validates():
    with pytest.raises(ParameterError):
        ModelParams().replace(xi=-1)
