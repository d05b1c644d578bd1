"""
Tests for the multiplier engine and the quadrature oracles.

Oracle tests compare the integral representations against the closed-form
symbols on the coarse grid; both paths share only forward/inverse.
"""
import logging

import numpy as np
import pytest
from scipy.special import gamma

from biharm_lipschitz.calculus import (StepProfile, SymbolKind, SymbolSpec, ZeroModePolicy, apply,
                                       biharmonic, fractional_power_constant, fractional_power_oracle,
                                       gamma_quadrature_oracle, heat_time_derivative,
                                       subordinated_poisson_oracle, subordination_scalar,
                                       symbol_array, symbol_value)
from biharm_lipschitz.errors import (DomainError, NonZeroMean, QuadratureDivergence,
                                     SingularAtZero)
from biharm_lipschitz.grid import GridFunction, GridSpec, SpectralFunction, forward, inverse, sup_norm
from biharm_lipschitz.kernel import sup_norm_bound_constant
from biharm_lipschitz.lipschitz import random_trig
from biharm_lipschitz.quadrature import LogQuadrature
from tests.conftest import build_symbol, cosine, relative_sup_error


# ============================================================================
# Symbols
# ============================================================================


def test_symbol_values(symbol_case):
    value = symbol_value(build_symbol(symbol_case), symbol_case['xi'])
    real, imag = symbol_case['expected']
    assert value.real == pytest.approx(real, rel=1e-14, abs=1e-15)
    assert value.imag == pytest.approx(imag, rel=1e-14, abs=1e-15)


@pytest.mark.parametrize('spec', [
    SymbolSpec.fractional_integral(1.0),
    SymbolSpec.riesz_pre(1),
    SymbolSpec.riesz_post(1, ZeroModePolicy.FORBID),
])
def test_singular_symbols_at_origin(spec):
    with pytest.raises(SingularAtZero):
        symbol_value(spec, 0.0)


def test_singular_kinds_default_to_projection():
    assert SymbolSpec.riesz_pre(1).zero_mode is ZeroModePolicy.PROJECT
    assert SymbolSpec.heat(1.0).zero_mode is ZeroModePolicy.KEEP


@pytest.mark.parametrize('factory', [
    lambda: SymbolSpec.heat(0.0),
    lambda: SymbolSpec.poisson(-1.0),
    lambda: SymbolSpec.heat_time_deriv(1.0, 0),
    lambda: SymbolSpec.bessel_potential(0.0),
    lambda: SymbolSpec.fractional_power(-0.5),
    lambda: SymbolSpec.riesz_pre(0),
    lambda: SymbolSpec.partial_derivative(1, 0),
    lambda: SymbolSpec(SymbolKind.FRACTIONAL_INTEGRAL, zero_mode=ZeroModePolicy.KEEP, beta=1.0),
    lambda: SymbolSpec(SymbolKind.LAPLACE_MULTIPLIER),
    lambda: SymbolSpec.mixed_heat_deriv(1.0, -1, 1, 1),
])
def test_symbol_spec_validation(factory):
    with pytest.raises(DomainError):
        factory()


def test_axis_checked_against_dimension(grid_1d):
    with pytest.raises(DomainError, match="axis"):
        symbol_array(SymbolSpec.partial_derivative(2), grid_1d)


def test_symbol_array_is_conjugate_symmetric(grid_1d):
    values = symbol_array(SymbolSpec.partial_derivative(1, 1), grid_1d)
    # odd symbol: the self-conjugate Nyquist mode acts through its real part
    assert values[128] == 0.0
    np.testing.assert_allclose(values[1:128], np.conj(values[:128:-1]))


@pytest.mark.parametrize('breakpoints, levels', [
    ((0.0,), (1.0,)),
    ((0.0, 1.0), (1.0, 2.0)),
    ((0.5, 1.0), (1.0,)),
    ((0.0, 2.0, 1.0), (1.0, 1.0)),
    ((0.0, np.inf), (1.0,)),
])
def test_step_profile_validation(breakpoints, levels):
    with pytest.raises(DomainError):
        StepProfile(breakpoints, levels)


@pytest.mark.parametrize('profile', [
    StepProfile.constant(1.0, 10.0),
    StepProfile((0.0, 1.0, 2.0), (1.0, -1.0)),
    StepProfile((0.0, 0.5, 3.0), (0.5, 0.25)),
])
def test_laplace_symbol_bounded_by_profile(profile):
    lam = np.concatenate([[0.0], np.logspace(-6, 6, 400)])
    assert np.max(np.abs(profile.laplace_symbol(lam))) <= profile.sup_norm + 1e-12


# ============================================================================
# apply
# ============================================================================


def test_heat_on_single_mode(grid_1d, cos_1d):
    u = apply(SymbolSpec.heat(0.5), cos_1d)
    assert relative_sup_error(u, cos_1d * np.exp(-0.5)) < 1e-13


def test_semigroup_law(small_grid_1d):
    f = random_trig(small_grid_1d, seed=1, modes=8)
    once = apply(SymbolSpec.heat(0.03), apply(SymbolSpec.heat(0.02), f))
    assert relative_sup_error(once, apply(SymbolSpec.heat(0.05), f)) <= 1e-11


def test_heat_conserves_mass(grid_2d):
    f = GridFunction.from_callable(grid_2d, lambda x, y: 2.0 + np.cos(x) * np.sin(2 * y) + np.sin(3 * x))
    for t in (1e-4, 1e-2, 1.0):
        assert apply(SymbolSpec.heat(t), f).mean() == pytest.approx(f.mean(), rel=1e-13)


def test_heat_sup_bound(grid_1d):
    f = GridFunction.from_callable(grid_1d, lambda x: np.sign(np.sin(x)))
    bound = sup_norm_bound_constant(1)
    for t in (1e-3, 1e-2, 1e-1, 1.0):
        assert sup_norm(apply(SymbolSpec.heat(t), f)) <= bound * sup_norm(f)


def test_riesz_squares_sum_to_minus_identity(grid_2d):
    f = random_trig(grid_2d, seed=3, modes=4)
    total = GridFunction.zeros(grid_2d)
    for i in (1, 2):
        R = SymbolSpec.riesz_pre(i, ZeroModePolicy.FORBID)
        total = total + apply(R, apply(R, f))
    assert relative_sup_error(total, -f) < 1e-12


def test_riesz_identity_holds_off_the_nyquist_lines():
    """Odd symbols vanish on k_i = -N/2, so the identity needs Nyquist-free input."""
    spec = GridSpec(2, 64, 2.0 * np.pi)
    rng = np.random.default_rng(17)
    f = GridFunction(spec, rng.standard_normal(spec.shape)).centered()
    coeffs = np.array(forward(f).coeffs)
    coeffs[32, :] = 0.0
    coeffs[:, 32] = 0.0
    g = inverse(SpectralFunction(spec, coeffs))

    def riesz_square_sum(h):
        total = GridFunction.zeros(spec)
        for i in (1, 2):
            R = SymbolSpec.riesz_pre(i, ZeroModePolicy.FORBID)
            total = total + apply(R, apply(R, h))
        return total

    assert relative_sup_error(riesz_square_sum(g), -g) < 1e-12
    assert relative_sup_error(riesz_square_sum(f), -f) > 1e-3


def test_riesz_orderings_agree(grid_2d):
    f = random_trig(grid_2d, seed=4, modes=4)
    for i in (1, 2):
        pre = apply(SymbolSpec.riesz_pre(i), f)
        post = apply(SymbolSpec.riesz_post(i), f)
        assert sup_norm(pre - post) <= 1e-12 * sup_norm(f)


def test_derivative_commutes_with_heat(grid_2d):
    f = random_trig(grid_2d, seed=5, modes=4)
    heat, d2 = SymbolSpec.heat(0.01), SymbolSpec.partial_derivative(2, 1)
    assert relative_sup_error(apply(d2, apply(heat, f)), apply(heat, apply(d2, f))) < 1e-12


def test_heat_solves_biharmonic_heat_equation(grid_2d):
    """d_t W_t f = -Delta^2 W_t f."""
    f = random_trig(grid_2d, seed=6, modes=4)
    t = 1e-3
    lhs = heat_time_derivative(f, t, 1)
    rhs = -biharmonic(apply(SymbolSpec.heat(t), f))
    assert relative_sup_error(lhs, rhs) < 1e-10


def test_biharmonic_of_single_mode(grid_1d):
    f = cosine(grid_1d, xi=1.5)
    # xi^4 lifts rounding noise by up to (N/4)^4 ~ 1.7e7 near Nyquist
    assert relative_sup_error(biharmonic(f), 1.5 ** 4 * f) < 1e-8


def test_mixed_derivative_matches_composition(grid_2d):
    f = random_trig(grid_2d, seed=8, modes=4)
    mixed = apply(SymbolSpec.mixed_heat_deriv(0.01, 1, 1, 2), f)
    composed = apply(SymbolSpec.partial_derivative(1, 2), heat_time_derivative(f, 0.01, 1))
    assert relative_sup_error(mixed, composed) < 1e-12


def test_forbid_rejects_non_zero_mean(grid_1d, cos_1d):
    f = cos_1d + GridFunction(grid_1d, np.ones(256))
    with pytest.raises(NonZeroMean):
        apply(SymbolSpec.fractional_integral(1.0, ZeroModePolicy.FORBID), f)


def test_project_drops_zero_mode_with_warning(grid_1d, cos_1d, caplog):
    f = cos_1d + GridFunction(grid_1d, np.ones(256))
    with caplog.at_level(logging.WARNING, logger='biharm_lipschitz.calculus'):
        g = apply(SymbolSpec.fractional_integral(1.0), f)
    assert 'dropping zero mode' in caplog.text
    assert abs(g.mean()) < 1e-14
    # cos(x) has |xi| = 1: I_beta leaves it unchanged
    assert relative_sup_error(g, cos_1d) < 1e-13


def test_fractional_integral_inverts_power(small_grid_1d, smooth_1d):
    g = apply(SymbolSpec.fractional_power(1.3), smooth_1d)
    back = apply(SymbolSpec.fractional_integral(1.3, ZeroModePolicy.FORBID), g)
    assert relative_sup_error(back, smooth_1d) < 1e-12


def test_apply_returns_real_function(grid_1d, cos_1d):
    u = apply(SymbolSpec.partial_derivative(1, 1), cos_1d)
    assert u.values.dtype == np.float64
    assert relative_sup_error(u, -GridFunction.from_callable(grid_1d, np.sin)) < 1e-12


# ============================================================================
# Oracles
# ============================================================================


@pytest.mark.parametrize('beta', [0.5, 1.0, 3.0, 6.0])
def test_gamma_oracle_bessel(small_grid_1d, smooth_1d, beta):
    f = smooth_1d + GridFunction(small_grid_1d, np.full(64, 0.7))
    oracle = gamma_quadrature_oracle(f, beta, bessel=True)
    assert relative_sup_error(oracle, apply(SymbolSpec.bessel_potential(beta), f)) < 1e-6


@pytest.mark.parametrize('beta', [0.5, 2.0])
def test_gamma_oracle_fractional_integral(smooth_1d, beta):
    oracle = gamma_quadrature_oracle(smooth_1d, beta, bessel=False)
    expected = apply(SymbolSpec.fractional_integral(beta, ZeroModePolicy.FORBID), smooth_1d)
    assert relative_sup_error(oracle, expected) < 1e-6


def test_gamma_oracle_two_dimensional(grid_2d):
    f = random_trig(grid_2d, seed=9, modes=4)
    oracle = gamma_quadrature_oracle(f, 1.0, bessel=False)
    expected = apply(SymbolSpec.fractional_integral(1.0), f)
    assert relative_sup_error(oracle, expected) < 1e-6


def test_gamma_oracle_needs_mean_zero(small_grid_1d, smooth_1d):
    f = smooth_1d + GridFunction(small_grid_1d, np.ones(64))
    with pytest.raises(NonZeroMean):
        gamma_quadrature_oracle(f, 1.0, bessel=False)


def test_gamma_oracle_short_range_diverges(smooth_1d):
    with pytest.raises(QuadratureDivergence):
        gamma_quadrature_oracle(smooth_1d, 1.0, quad=LogQuadrature(s_min=1e-12, s_max=1e-3))


@pytest.mark.parametrize('beta', [1.0, 2.0, 3.0])
def test_fractional_power_constant_single_difference(beta):
    assert fractional_power_constant(beta) == pytest.approx(gamma(-beta / 4.0), rel=1e-8)


def test_fractional_power_constant_double_difference():
    """For 1 < a < 2, Int (e^-u - 1)^2 u^(-1-a) du = Gamma(-a) (2^a - 2)."""
    a = 1.5
    assert fractional_power_constant(4 * a) == pytest.approx(gamma(-a) * (2 ** a - 2), rel=1e-8)


@pytest.mark.parametrize('beta', [0.5, 1.5, 6.0])
def test_fractional_power_oracle(smooth_1d, beta):
    oracle = fractional_power_oracle(smooth_1d, beta)
    assert relative_sup_error(oracle, apply(SymbolSpec.fractional_power(beta), smooth_1d)) < 1e-6


@pytest.mark.parametrize('beta', [4.0, 8.0])
def test_fractional_power_multiple_of_four(smooth_1d, beta):
    with pytest.raises(DomainError):
        fractional_power_oracle(smooth_1d, beta)


@pytest.mark.parametrize('t', [0.5, 1.0, 2.0])
@pytest.mark.parametrize('lam', [0.1, 1.0, 10.0])
def test_subordination_scalar(t, lam):
    assert subordination_scalar(t, lam) == pytest.approx(np.exp(-t * lam ** 0.25), abs=1e-6)


def test_subordination_scalar_vectorized():
    lam = np.array([0.0, 0.5, 2.0])
    np.testing.assert_allclose(subordination_scalar(1.0, lam), np.exp(-lam ** 0.25), atol=1e-6)
    with pytest.raises(DomainError):
        subordination_scalar(0.0, 1.0)
    with pytest.raises(DomainError):
        subordination_scalar(1.0, -1.0)


@pytest.mark.parametrize('t', [0.3, 1.0])
def test_subordinated_poisson_oracle(smooth_1d, t):
    oracle = subordinated_poisson_oracle(smooth_1d, t)
    assert relative_sup_error(oracle, apply(SymbolSpec.poisson(t), smooth_1d)) < 1e-5


def test_oracles_leave_spectrum_support(smooth_1d):
    """Oracle outputs carry no modes the input does not have."""
    F = forward(smooth_1d)
    G = forward(fractional_power_oracle(smooth_1d, 1.0))
    silent = np.abs(F.coeffs) < 1e-14
    assert np.max(np.abs(G.coeffs[silent])) < 1e-12
