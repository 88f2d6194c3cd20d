import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from hulthen_monopole.analytic import (
    NoBoundStateError,
    align_branch,
    bound_energy,
    bound_energy_via_smatrix_pole,
    bound_state,
    bound_state_count,
    energy_formula,
    explicit_energy,
    frobenius_energy,
    frobenius_solve,
    hypergeometric_ode_residual,
    kappa_b_closed_form,
    node_count,
    phase_shift,
    s_matrix,
    scattering,
    scattering_params,
    scattering_wavefunction,
    textbook_energy,
    wrap_phase,
    xi_limit_energy,
)
from hulthen_monopole.model import Channel, ModelParams, derive_channel_params
from hulthen_monopole.monopole import SelfInteractionCoupling, coupling_k
from hulthen_monopole.specfun import GammaPoleError


def setup(alpha=0.8, xi=0.1):
    return ModelParams(alpha=alpha, xi=xi), coupling_k(alpha)


# ------------------------------------------------------------ bound states


@pytest.mark.parametrize("alpha", [0.6, 1.0, 1.5])
def test_three_routes_agree(alpha):
    p, c = setup(alpha, 0.05)
    for l in range(3):
        for n in range(bound_state_count(p, c, l)):
            ch = Channel(n, l)
            e = bound_energy(p, c, ch)
            assert bound_energy_via_smatrix_pole(p, c, ch) == pytest.approx(e, rel=1e-10)
            assert frobenius_energy(p, c, ch) == pytest.approx(e, rel=1e-10)
            assert explicit_energy(p, c, ch) == pytest.approx(e, rel=1e-12)


def test_textbook_reduction_at_alpha_one():
    p = ModelParams(alpha=1.0, xi=0.05)
    c = SelfInteractionCoupling.fixed(0.0)
    for l in range(3):
        for n in range(bound_state_count(p, c, l)):
            ch = Channel(n, l)
            assert bound_energy(p, c, ch) == pytest.approx(textbook_energy(p, ch), rel=1e-12)


def test_hulthen_count_reference():
    p, c = setup(1.0, 0.1)
    assert bound_state_count(p, c, 0) == 4


def test_count_monotone_in_l():
    p, c = setup(0.7, 0.02)
    counts = [bound_state_count(p, c, l) for l in range(12)]
    assert all(a >= b for a, b in zip(counts, counts[1:]))
    assert counts[0] > 0


def test_no_bound_state_error_carries_n_max():
    p, c = setup(1.0, 0.1)
    with pytest.raises(NoBoundStateError) as info:
        bound_energy(p, c, Channel(4, 0))
    assert info.value.n_max == 4
    # repulsive net coupling: no states at all
    weak = ModelParams(alpha=0.2, xi=0.1)
    assert bound_state_count(weak, coupling_k(0.2), 1) == 0
    with pytest.raises(NoBoundStateError):
        bound_energy(weak, coupling_k(0.2), Channel(0, 1))


def test_energies_increase_with_n():
    p, c = setup(0.9, 0.02)
    e = [bound_energy(p, c, Channel(n, 1)) for n in range(bound_state_count(p, c, 1))]
    assert all(a < b < 0 for a, b in zip(e, e[1:]))


def test_xi_limit_convergence():
    p, c = setup(0.7)
    ch = Channel(1, 1)
    ref = xi_limit_energy(p, c, ch)
    errs = [abs(bound_energy(p.replace(xi=xi), c, ch) - ref) for xi in (1e-3, 1e-4, 1e-5)]
    # the leading correction is linear in xi
    assert errs[0] / errs[1] == pytest.approx(10, rel=0.01)
    assert errs[1] / errs[2] == pytest.approx(10, rel=0.01)
    assert errs[2] < 1e-4 * abs(ref)


def test_table1_ordering():
    p, c = setup(0.7)
    e = [xi_limit_energy(p, c, Channel(1, l)) for l in range(1, 11)]
    assert all(a < b for a, b in zip(e, e[1:]))


def test_energy_formula_matches_mpmath():
    p, c = setup(1.3, 0.07)
    dp = derive_channel_params(p, c, Channel(2, 1))
    mpmath.mp.dps = 30
    m = mpmath.mpf(dp.d) + 2
    ref = -((m * m - mpmath.mpf(dp.wp_sq)) ** 2) / (mpmath.mpf(dp.beta) * m * m)
    mpmath.mp.dps = 15
    assert energy_formula(dp, 2) == pytest.approx(float(ref), rel=1e-13)


# --------------------------------------------------------------- Frobenius


def test_frobenius_terminates_only_at_eigenvalue():
    p, c = setup(0.8, 0.05)
    ch = Channel(2, 1)
    e = bound_energy(p, c, ch)
    on = frobenius_solve(p, c, ch, e)
    off = frobenius_solve(p, c, ch, 0.9 * e)
    assert on.terminated and on.residual < 1e-12
    assert not off.terminated and off.residual > 1e-4


def test_frobenius_first_ratio():
    p, c = setup(0.8, 0.05)
    sol = frobenius_solve(p, c, Channel(0, 1), -0.01)
    assert sol.coefficients[1] / sol.coefficients[0] == pytest.approx(sol.zeta1 * sol.zeta2 / sol.zeta3, rel=1e-15)


# ------------------------------------------------------------ wavefunctions


@pytest.mark.parametrize("n", [0, 1, 2])
def test_wavefunction_nodes_norm_origin(n):
    p, c = setup(1.2, 0.05)
    bs = bound_state(p, c, Channel(n, 1))
    r = np.linspace(0, bs.extent(), 40001)
    u = bs(r)
    assert u[0] == 0.0
    assert node_count(u[1:]) == n
    val, _ = integrate.quad(lambda x: bs(x) ** 2, 0, bs.extent(), limit=400, epsabs=1e-13)
    assert val == pytest.approx(1.0, abs=1e-9)


def test_wavefunction_solves_radial_equation():
    p, c = setup(0.9, 0.1)
    from hulthen_monopole.potentials import Mode, v_eff

    bs = bound_state(p, c, Channel(1, 1))
    h = 1e-3
    r = np.linspace(1.0, 30.0, 59)
    u = bs(r)
    d2 = (bs(r + h) - 2 * u + bs(r - h)) / h**2
    lhs = d2 / p.kinetic_scale
    rhs = (v_eff(r, p, c, 1, Mode.APPROX) - bs.energy) * u
    assert np.max(np.abs(lhs - rhs)) < 1e-5 * np.max(np.abs(u))


def test_kappa_b_closed_form_consistent():
    p, c = setup(1.2, 0.05)
    dp = derive_channel_params(p, c, Channel(1, 0))
    kb = kappa_b_closed_form(dp, 1)
    e = bound_energy(p, c, Channel(1, 0))
    assert e == pytest.approx(-(p.hbar * p.alpha * p.xi * kb) ** 2 / (2 * p.mass), rel=1e-13)


# -------------------------------------------------------------- scattering


@settings(max_examples=50, deadline=None)
@given(st.floats(0.3, 2.0), st.floats(0.02, 1.0), st.integers(0, 4), st.floats(0.01, 5.0))
def test_unitarity(alpha, xi, l, e):
    p, c = setup(alpha, xi)
    res = scattering(p, c, l, e)
    assert abs(abs(res.s_matrix) - 1) < 1e-12


def test_delta_sign_symmetry():
    # the phase depends on Delta only through the pair {+Delta, -Delta}
    p, c = setup(0.8, 0.1)
    sp = scattering_params(p, c, 1, 0.3)
    flipped = type(sp)(**{**sp.__dict__, "delta": -sp.delta, "a": sp.b, "b": sp.a})
    assert phase_shift(flipped) == pytest.approx(phase_shift(sp), abs=1e-12)


def test_parameter_relations():
    p, c = setup(0.8, 0.1)
    for e in (0.01, 2.0):  # Delta real, then imaginary
        sp = scattering_params(p, c, 1, e)
        assert sp.a + sp.b == pytest.approx(2 * sp.d - 2j * sp.kappa)
        assert sp.c == 2 * sp.d
        assert sp.delta**2 == pytest.approx(sp.wp_sq - sp.kappa**2)
        assert sp.delta.imag >= 0


def test_s_matrix_values():
    assert s_matrix(0.0) == 1
    assert s_matrix(math.pi / 4) == pytest.approx(1j)
    assert s_matrix(math.pi / 2) == pytest.approx(-1)


def test_free_wave_phase():
    # no interaction and alpha = 1: Bessel regular solution, delta = 0 when ell = l
    p = ModelParams(alpha=1.0, xi=1e-9, Z=0.0)
    c = SelfInteractionCoupling.fixed(0.0)
    sp = scattering_params(p, c, 2, 0.5)
    assert wrap_phase(phase_shift(sp, ell=2)) == pytest.approx(0.0, abs=1e-6)


@pytest.mark.parametrize("e", [0.05, 0.5, 3.0])
def test_hypergeometric_ode_residual(e):
    p, c = setup(1.3, 0.2)
    sp = scattering_params(p, c, 2, e)
    for y in (0.1, 0.5, 0.9):
        assert hypergeometric_ode_residual(sp, y) < 1e-10


def test_scattering_wavefunction_large_r_phase():
    p, c = setup(0.8, 0.5)
    sp = scattering_params(p, c, 1, 0.4)
    delta = phase_shift(sp)
    r = np.linspace(50, 65, 200)
    u = np.array([scattering_wavefunction(sp, x) for x in r])
    basis = np.sin(sp.k * r - 0.5 * math.pi * sp.ell + delta)
    amp = np.vdot(basis, u) / np.vdot(basis, basis)
    assert np.max(np.abs(u - amp * basis)) < 1e-8 * abs(amp)


def test_scattering_wavefunction_origin():
    p, c = setup()
    sp = scattering_params(p, c, 0, 0.2)
    assert scattering_wavefunction(sp, 0.0) == 0
    with pytest.raises(ValueError):
        scattering_wavefunction(sp, -1.0)


def test_pole_detection():
    # choose E so that d + i kappa - Delta hits -n exactly: impossible for real kappa,
    # so check the guard directly on a constructed parameter set
    p, c = setup(0.8, 0.1)
    sp = scattering_params(p, c, 1, 0.3)
    bad = type(sp)(**{**sp.__dict__, "kappa": 1e-300j * 0 + 1.0, "delta": complex(sp.d + 1j * 1.0 + 1)})
    with pytest.raises(GammaPoleError):
        phase_shift(bad)


def test_errors():
    p, c = setup()
    with pytest.raises(ValueError):
        scattering_params(p, c, 0, 0.0)


def test_wrap_and_align():
    assert wrap_phase(math.pi) == pytest.approx(0.0, abs=1e-15)
    assert wrap_phase(-math.pi / 2) == math.pi / 2
    raw = np.array([0.1, 0.2 + math.pi, 0.3 - math.pi, 0.4])
    assert np.allclose(align_branch(raw), [0.1, 0.2, 0.3, 0.4])


def test_phase_continuous_in_energy():
    p, c = setup(1.2, 0.1)
    e = np.linspace(0.3, 3.0, 300)
    raw = np.array([scattering(p, c, 1, x).delta_l for x in e])
    # the continuous log-gamma already gives a smooth curve; branch alignment changes nothing
    assert np.max(np.abs(np.diff(raw))) < 0.05
    assert np.allclose(align_branch(raw), raw)
