"""
Tests for the composite Gauss-Legendre rules.
"""
import numpy as np
import pytest

from biharm_lipschitz.errors import BadQuadrature
from biharm_lipschitz.quadrature import (LogQuadrature, RadialQuadrature, gauss_legendre_panels,
                                         log_graded_rule)


def test_panels_integrate_polynomials_exactly():
    x, w = gauss_legendre_panels(np.array([0.0, 0.3, 1.0, 2.5]), 4)
    assert len(x) == 12
    # 4 nodes per panel are exact for degree 7
    assert np.dot(w, x ** 7) == pytest.approx(2.5 ** 8 / 8, rel=1e-13)


def test_radial_rule_covers_truncation():
    quad = RadialQuadrature(truncation=8.0, nodes=256, panels=8)
    rho, w = quad.rule()
    assert len(rho) == 256
    assert np.all(np.diff(rho) > 0)
    assert 0.0 < rho[0] < rho[-1] < 8.0
    assert w.sum() == pytest.approx(8.0, rel=1e-13)
    # graded toward 0: first gaps smaller than last gaps
    assert rho[1] - rho[0] < rho[-1] - rho[-2]


def test_radial_rule_gaussian_moment():
    rho, w = RadialQuadrature().rule()
    assert np.dot(w, np.exp(-rho ** 4)) == pytest.approx(0.9064024770554771, rel=1e-12)


def test_angular_rule_is_exact_for_trigonometric_polynomials():
    theta, w = RadialQuadrature(angular_points=32).angular_rule()
    assert np.dot(w, np.cos(theta) ** 2) == pytest.approx(np.pi, rel=1e-14)
    assert abs(np.dot(w, np.cos(3 * theta))) < 1e-14


@pytest.mark.parametrize('kwargs', [
    {'truncation': 2.0},
    {'nodes': 32, 'panels': 4},
    {'nodes': 1000, 'panels': 16},
    {'angular_points': 8},
])
def test_bad_radial_quadrature(kwargs):
    with pytest.raises(BadQuadrature):
        RadialQuadrature(**kwargs)


def test_log_graded_rule_gamma_integral():
    """Int_0^inf e^-s s^(a-1) ds = Gamma(a), on panels in ln s."""
    a = 0.25
    s, w = log_graded_rule(np.log(1e-60), np.log(40.0), 8, 1.0)
    assert np.dot(w, np.exp(-s) * s ** (a - 1.0)) == pytest.approx(3.625609908221908, rel=1e-9)


def test_log_quadrature_rule_range():
    s, w = LogQuadrature(nodes_per_panel=6, panel_width=0.5).rule(1e-3, 10.0)
    assert s.min() > 1e-3 and s.max() < 10.0
    assert w.sum() == pytest.approx(10.0 - 1e-3, rel=1e-12)


def test_bad_log_quadrature():
    with pytest.raises(BadQuadrature):
        LogQuadrature(nodes_per_panel=1)
    with pytest.raises(BadQuadrature):
        LogQuadrature(panel_width=0.0)
    with pytest.raises(BadQuadrature):
        LogQuadrature(s_min=2.0, s_max=1.0)
    with pytest.raises(BadQuadrature, match="empty"):
        log_graded_rule(1.0, 1.0, 8, 1.0)


def test_defaults_from_yaml():
    assert RadialQuadrature.from_defaults() == RadialQuadrature()
    quad = LogQuadrature.from_defaults()
    assert quad.nodes_per_panel == 8
    assert quad.s_min is None and quad.s_max is None
