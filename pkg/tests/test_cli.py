"""
Tests for the `biharm` command line: configuration resolution, exit codes
and the files each subcommand writes.
"""
import csv

import numpy as np
import pytest
import yaml

from biharm_lipschitz.cli import main, parse_config, solve_cauchy, solve_failures, symbol_from_params
from biharm_lipschitz.calculus import SymbolKind
from biharm_lipschitz.errors import ConfigError
from biharm_lipschitz.grid import load_csv
from biharm_lipschitz.kernel import C_EXPONENT, sup_norm_bound_constant


@pytest.fixture(autouse=True)
def workdir(tmp_path, monkeypatch):
    """Run every command inside a temporary directory without BIHARM_JOBS."""
    monkeypatch.chdir(tmp_path)
    monkeypatch.delenv('BIHARM_JOBS', raising=False)
    return tmp_path


def write_config(path, data):
    path.write_text(yaml.safe_dump(data))
    return str(path)


def read_rows(path):
    with open(path, newline='') as f:
        return list(csv.DictReader(f))


# ============================================================================
# Exit codes
# ============================================================================


@pytest.mark.parametrize('argv', [
    [],
    ['bogus'],
    ['verify', '--levels', '256'],
    ['verify', '--levels', '256,300'],
    ['apply', '--op', 'heat', '--t', '-1'],
    ['apply', '--op', 'riesz-pre', '--i', '2'],
    ['apply', '--op', 'heat', '--oracle'],
    ['apply', '--op', 'bessel', '--oracle', '--zero-mode', 'keep'],
    ['seminorm', '--estimator', 'diff2', '--alpha', '2'],
    ['seminorm', '--ymax', '100'],
    ['kernel', '--r-max', '5'],
    ['kernel', '--order', '1'],
    ['apply', '--input', 'missing.csv'],
])
def test_invalid_configuration_exits_2(argv, capsys):
    assert main(argv) == 2


def test_help_exits_0(capsys):
    assert main(['--help']) == 0
    assert 'biharm' in capsys.readouterr().out


def test_runtime_error_exits_3(workdir, capsys):
    (workdir / 'bad.csv').write_text('1.0\n2.0\n')
    assert main(['apply', '--input', 'bad.csv']) == 3
    assert 'apply failed' in capsys.readouterr().err


def test_configuration_error_names_key(capsys):
    main(['apply', '--op', 'heat', '--t', '-1'])
    err = capsys.readouterr().err
    assert 'configuration error' in err
    assert 't:' in err


# ============================================================================
# Configuration resolution
# ============================================================================


def test_flags_override_file_override_defaults(workdir):
    path = write_config(workdir / 'run.yaml', {
        'grid': {'points_per_axis': 64},
        'seminorm': {'alpha': 0.5, 'estimator': 'poisson'},
        'seed': 11,
    })
    config = parse_config(['--config', path, 'seminorm', '--alpha', '1.0'])
    assert config.params['alpha'] == 1.0
    assert config.params['estimator'] == 'poisson'
    assert config.params['tnum'] == 200
    assert config.grid.points_per_axis == 64
    assert config.grid.dim == 1
    assert config.seed == 11


def test_unknown_config_key(workdir):
    path = write_config(workdir / 'run.yaml', {'kernel': {'radius': 12.0}})
    with pytest.raises(ConfigError, match="unknown keys"):
        parse_config(['kernel'], config_file=path)


def test_invalid_values_from_config_file(workdir):
    path = write_config(workdir / 'run.yaml', {'apply': {'op': 'laplace'}})
    with pytest.raises(ConfigError) as info:
        parse_config(['apply'], config_file=path)
    assert info.value.key == 'op'
    path = write_config(workdir / 'run.yaml', {'seminorm': {'estimator': 'wavelet'}})
    with pytest.raises(ConfigError) as info:
        parse_config(['seminorm'], config_file=path)
    assert info.value.key == 'estimator'


def test_jobs_from_environment(monkeypatch):
    monkeypatch.setenv('BIHARM_JOBS', '3')
    assert parse_config(['kernel']).jobs == 3
    assert parse_config(['--jobs', '2', 'kernel']).jobs == 2
    monkeypatch.setenv('BIHARM_JOBS', 'many')
    with pytest.raises(ConfigError, match="BIHARM_JOBS"):
        parse_config(['kernel'])
    with pytest.raises(ConfigError, match="jobs"):
        parse_config(['--jobs', '0', 'kernel'])


def test_symbol_from_params():
    params = {'op': 'mixed', 't': 0.5, 'beta': 1.0, 'k': 2, 'i': 1, 'order': 3, 'zero_mode': None,
              'breakpoints': '0,10', 'heights': '1'}
    S = symbol_from_params(params, 1)
    assert S.kind is SymbolKind.MIXED_HEAT_DERIV
    assert S.order == 3
    with pytest.raises(ConfigError, match="heights"):
        symbol_from_params(dict(params, op='laplace-mult', heights='1,x'), 1)
    with pytest.raises(ConfigError) as info:
        symbol_from_params(dict(params, op='laplace-mult', breakpoints='0,1,2'), 1)
    assert info.value.key == 'breakpoints'


# ============================================================================
# Subcommands
# ============================================================================


def test_kernel_command(workdir, capsys):
    assert main(['kernel', '--out', 'g.csv', '--samples', '101']) == 0
    rows = read_rows(workdir / 'g.csv')
    assert len(rows) == 101
    assert list(rows[0]) == ['r', 'value', 'bound_ratio']
    assert 'pass' in capsys.readouterr().out


def test_kernel_command_fails_for_large_exponent(capsys):
    assert main(['kernel', '--c-prime', str(4 * C_EXPONENT)]) == 1
    assert 'FAIL' in capsys.readouterr().out


def test_apply_command(workdir, capsys):
    assert main(['apply', '--op', 'heat', '--t', '0.5', '--N', '64', '--out', 'u.csv']) == 0
    u = load_csv(workdir / 'u.csv')
    assert u.spec.points_per_axis == 64
    assert u.values.max() == pytest.approx(np.exp(-0.5), rel=1e-12)


def test_apply_command_with_oracle(workdir, capsys):
    argv = ['apply', '--op', 'bessel', '--beta', '2', '--N', '64']
    assert main(argv + ['--out', 'spectral.csv']) == 0
    assert main(argv + ['--oracle', '--out', 'oracle.csv']) == 0
    spectral = load_csv(workdir / 'spectral.csv')
    oracle = load_csv(workdir / 'oracle.csv')
    assert np.max(np.abs(spectral.values - oracle.values)) < 1e-6


def test_seminorm_command(workdir, capsys):
    assert main(['seminorm', '--N', '256', '--out', 's.csv']) == 0
    [row] = read_rows(workdir / 's.csv')
    assert row['estimator'] == 'heat'
    assert row['k'] == '1'
    assert row['boundary_flag'] == 'false'
    assert float(row['value']) == pytest.approx(0.38073, rel=2e-3)


def test_solve_cauchy(workdir):
    config = parse_config(['solve', '--N', '64', '--times', '1,1e-2,1e-4,1e-6'])
    u, rows = solve_cauchy(config)
    distances = [dist for _, _, dist in rows]
    assert distances == sorted(distances, reverse=True)
    assert distances[-1] < 1e-5
    bound = sup_norm_bound_constant(1)
    assert all(ratio <= bound for _, ratio, _ in rows)


def test_solve_command_writes_table(workdir, capsys):
    assert main(['solve', '--N', '64', '--times', '1,1e-3', '--table', 'table.csv']) == 0
    rows = read_rows(workdir / 'table.csv')
    assert [float(r['t']) for r in rows] == [1.0, 1e-3]
    assert (workdir / 'solution.csv').is_file()


def test_solve_convergence_is_checked(workdir, capsys):
    config = parse_config(['solve', '--N', '128', '--times', '1e-6,1e-2,1e-4'])
    _, rows = solve_cauchy(config)
    assert solve_failures(rows, 1) == []
    assert main(['solve', '--N', '128', '--times', '1e-2,1e-4,1e-6']) == 0
    assert 'FAIL' not in capsys.readouterr().out


def test_solve_failures_flag_growth_and_sup_bound():
    bound = sup_norm_bound_constant(1)
    # distance to f must shrink as t decreases
    rows = [(1e-2, 0.9, 1e-3), (1e-4, 0.99, 5e-3), (1e-6, 0.999, 1e-7)]
    [message] = solve_failures(rows, 1)
    assert message.startswith('t=0.0001') and 'grew' in message
    [message] = solve_failures([(1.0, 2.0 * bound, 0.5)], 1)
    assert 'exceeds' in message
    assert solve_failures([(1.0, 0.0, 0.0), (1e-2, 0.0, 0.0)], 1) == []


@pytest.mark.slow
def test_verify_command(workdir, capsys):
    argv = ['verify', '--levels', '64,128', '--corpus', 'single_mode', '--alphas', '1.5', '--out', 'r.csv']
    assert main(argv) == 0
    out = capsys.readouterr().out
    assert 'VERIFICATION SUITE' in out
    rows = read_rows(workdir / 'r.csv')
    assert rows and all(r['pass'] == 'true' for r in rows)
