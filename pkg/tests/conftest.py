"""
Shared pytest fixtures and utilities for biharm_lipschitz tests.

This file is automatically discovered by pytest and makes fixtures available
to all test files in this directory.

Key Features:
- grid fixtures: the default 1-D box [-2pi, 2pi) and a small 2-D box
- symbol_case / decay_case fixtures: parametrized from test_config_<topic>.yaml
- relative_sup_error: the comparison used for every operator agreement test

Data-driven cases:
- test_config_symbols.yaml: closed-form symbol values at single frequencies
- test_config_kernel.yaml: kernel decay cases (dimension, derivative order,
  radial range); cases with `slow: true` get the slow marker
"""

from pathlib import Path

import numpy as np
import pytest
import yaml

from biharm_lipschitz.calculus import StepProfile, SymbolKind, SymbolSpec, ZeroModePolicy
from biharm_lipschitz.grid import GridFunction, GridSpec, sup_norm


# Box side used across most tests: cos(x) is mode 2 and shifts reach |y| = pi
SIDE_LENGTH = 4.0 * np.pi


# ============================================================================
# YAML Configuration Utilities
# ============================================================================

_test_config_cache = {}


def load_test_config(topic):
    """
    Load test cases for a topic.

    Configurations are cached to avoid repeated file I/O during parametrized tests.

    Args:
        topic: Topic identifier (e.g., 'symbols', 'kernel')

    Returns:
        dict: Parsed test_config_<topic>.yaml
    """
    if topic in _test_config_cache:
        return _test_config_cache[topic]

    config_path = Path(__file__).parent / f'test_config_{topic}.yaml'

    with open(config_path, 'r') as f:
        config = yaml.safe_load(f)

    _test_config_cache[topic] = config
    return config


def build_symbol(case):
    """
    SymbolSpec from a test_config_symbols.yaml entry.

    The entry's params map onto SymbolSpec fields; a laplace-mult entry gives
    breakpoints/levels instead of a profile, and zero_mode is a policy name.
    """
    params = dict(case.get('params', {}))
    if 'breakpoints' in params:
        params['profile'] = StepProfile(tuple(params.pop('breakpoints')), tuple(params.pop('levels')))
    if 'zero_mode' in params:
        params['zero_mode'] = ZeroModePolicy(params['zero_mode'])
    return SymbolSpec(SymbolKind(case['kind']), **params)


# ============================================================================
# Utility Functions
# ============================================================================


def relative_sup_error(actual: GridFunction, expected: GridFunction) -> float:
    """sup|actual - expected| / sup|expected| (absolute when expected vanishes)."""
    scale = sup_norm(expected)
    diff = float(np.max(np.abs(actual.values - expected.values)))
    return diff / scale if scale > 0 else diff


def cosine(spec: GridSpec, xi: float = 1.0, axis: int = 1) -> GridFunction:
    """cos(xi x_axis) sampled on spec."""
    return GridFunction.from_callable(spec, lambda *x: np.cos(xi * x[axis - 1]))


# ============================================================================
# Fixtures
# ============================================================================


@pytest.fixture(scope='session')
def grid_1d():
    """Default 1-D grid: N = 256 on [-2pi, 2pi)."""
    return GridSpec(1, 256, SIDE_LENGTH)


@pytest.fixture(scope='session')
def small_grid_1d():
    """Coarse 1-D grid for quadrature-heavy tests."""
    return GridSpec(1, 64, SIDE_LENGTH)


@pytest.fixture(scope='session')
def grid_2d():
    """2-D grid: N = 32 per axis on [-pi, pi)^2."""
    return GridSpec(2, 32, 2.0 * np.pi)


@pytest.fixture
def cos_1d(grid_1d):
    """cos(x) on the default 1-D grid."""
    return cosine(grid_1d)


@pytest.fixture
def smooth_1d(small_grid_1d):
    """Mean-zero trigonometric polynomial with several modes on the coarse grid."""
    return GridFunction.from_callable(
        small_grid_1d,
        lambda x: np.cos(0.5 * x) - 0.3 * np.sin(2.0 * x) + 0.1 * np.cos(3.5 * x + 0.2),
    )


def pytest_generate_tests(metafunc):
    """
    Dynamically parametrize data-driven fixtures.

    - symbol_case: every entry of test_config_symbols.yaml 'cases'
    - decay_case: every entry of test_config_kernel.yaml 'decay_cases'
    """
    if 'symbol_case' in metafunc.fixturenames:
        cases = load_test_config('symbols')['cases']
        metafunc.parametrize('symbol_case', cases, ids=[c['id'] for c in cases])

    if 'decay_case' in metafunc.fixturenames:
        cases = load_test_config('kernel')['decay_cases']
        params = [
            pytest.param(c, marks=pytest.mark.slow) if c.get('slow') else c
            for c in cases
        ]
        ids = [f"d{c['dim']}_l{c['order'][0]}_k{c['order'][1]}" for c in cases]
        metafunc.parametrize('decay_case', params, ids=ids)
