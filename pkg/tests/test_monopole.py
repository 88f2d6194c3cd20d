import math

import mpmath
import numpy as np
import pytest

from hulthen_monopole.model import ModelParams, ParameterError
from hulthen_monopole.monopole import (
    SelfInteractionCoupling,
    SeriesToleranceError,
    coupling_k,
    partial_sum,
    s_series,
    s_truncated,
    series_terms,
)


def mp_reference(alpha: float) -> float:
    """S(alpha) with mpmath's extrapolated infinite sum (independent of the tail formula)."""
    mpmath.mp.dps = 30
    a = mpmath.mpf(alpha)
    value = mpmath.nsum(lambda l: (2 * l + 1) / mpmath.sqrt(4 * l * (l + 1) + a * a) - 1, [0, mpmath.inf])
    mpmath.mp.dps = 15
    return float(value)


# Frozen values from the extrapolated sum above
FROZEN = {
    0.5: 1.090939133237995,
    0.7: 0.48965973685599879,
    0.8: 0.29280128874848369,
    0.9: 0.13351452530156034,
    1.2: -0.2170521596080091,
    1.5: -0.47158676081650224,
    1.8: -0.68277802364827498,
}


@pytest.mark.parametrize("alpha,expected", sorted(FROZEN.items()))
def test_frozen_values(alpha, expected):
    assert s_series(alpha).s_alpha == pytest.approx(expected, abs=1e-12)


def test_against_live_mpmath():
    assert s_series(0.6).s_alpha == pytest.approx(mp_reference(0.6), abs=1e-12)


def test_alpha_one_exact_zero():
    assert np.all(series_terms(1.0, np.arange(1_000_000)) == 0.0)
    s = s_series(1.0)
    assert s.s_alpha == 0.0 and s.k_alpha == 0.0


def test_terms_match_high_precision_formula():
    alpha = 0.37
    mpmath.mp.dps = 40
    ref = [float((2 * l + 1) / mpmath.sqrt(4 * l * (l + 1) + mpmath.mpf(alpha) ** 2) - 1) for l in range(0, 5000, 97)]
    mpmath.mp.dps = 15
    assert np.allclose(series_terms(alpha, np.arange(0, 5000, 97)), ref, rtol=1e-14, atol=0)


def test_monotone_decreasing_in_alpha():
    grid = np.linspace(0.2, 2.0, 19)
    values = [s_series(float(a)).s_alpha for a in grid]
    assert all(a > b for a, b in zip(values, values[1:]))


def test_convergence_order():
    for alpha in (0.3, 1.7):
        l = 10**6
        assert abs(series_terms(alpha, np.array([l]))[0]) * (2 * l + 1) ** 2 == pytest.approx(
            abs(1 - alpha**2) / 2, rel=1e-5
        )


@pytest.mark.parametrize("alpha", [0.5, 0.7, 1.5])
@pytest.mark.parametrize("L", [100, 1000])
def test_tail_beats_brute_truncation(alpha, L):
    exact = FROZEN[alpha]
    corrected = s_truncated(alpha, L).s_alpha
    assert abs(exact - corrected) < 10 * abs(exact - partial_sum(alpha, 10 * L))


def test_doubling_stability():
    for alpha in (0.5, 1.8):
        assert abs(s_truncated(alpha, 8000).s_alpha - s_truncated(alpha, 4000).s_alpha) < 1e-12


def test_audit_fields():
    s = s_series(0.7)
    assert s.terms_used > 1000
    assert 0 <= s.tail_estimate < 1e-12


def test_coupling_scales_with_charge():
    base = coupling_k(0.7)
    assert base.k_alpha == pytest.approx(base.s_alpha / 2)
    doubled = coupling_k(ModelParams(alpha=0.7, charge=2.0))
    assert doubled.k_alpha == pytest.approx(4 * base.k_alpha)
    assert coupling_k(1.5).k_alpha < 0 < coupling_k(0.5).k_alpha


def test_errors():
    with pytest.raises(ParameterError):
        s_series(0.0)
    with pytest.raises(ParameterError):
        s_series(math.nan)
    with pytest.raises(SeriesToleranceError):
        s_series(0.5, 1e-30)
    with pytest.raises(ValueError):
        s_series(0.5, -1.0)


def test_fixed_coupling():
    c = SelfInteractionCoupling.fixed(0.25)
    assert c.k_alpha == 0.25 and c.terms_used == 0
