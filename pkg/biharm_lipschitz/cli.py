"""
Command line entry point `biharm`.

Subcommands:
    kernel    sample the kernel (or a derivative) and check its decay bound
    apply     apply a multiplier operator to a grid function
    seminorm  estimate a Lipschitz seminorm
    verify    run the verification suite and write the report CSV
    solve     solve the biharmonic heat equation from an initial function

Values come from, in increasing priority: package defaults, a YAML config
file (--config, one mapping per subcommand plus a `grid` mapping), and
command line flags. Exit status: 0 success, 1 check failure, 2 invalid
configuration, 3 runtime error.
"""

import argparse
import csv
import io
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np
import yaml

from .calculus import (SymbolKind, SymbolSpec, StepProfile, ZeroModePolicy, apply,
                       fractional_power_oracle, gamma_quadrature_oracle, subordinated_poisson_oracle)
from .config import default
from .errors import BiharmError, ConfigError
from .files import atomic_write_text, format_number
from .grid import GridFunction, GridSpec, l2_norm, load_csv, save_csv, sup_norm
from .kernel import build_profile, check_decay, profile_rows, sup_norm_bound_constant
from .lipschitz import (Estimator, TGrid, corpus_function, first_difference_modulus, seminorm_heat,
                        seminorm_poisson, seminorm_second_diff)
from .verify import run_suite, suite_matrix, write_report_csv

logger = logging.getLogger(__name__)

SUBCOMMANDS = ('kernel', 'apply', 'seminorm', 'verify', 'solve')

# Documented defaults per subcommand; the grid defaults come from defaults.yaml
DEFAULTS: Dict[str, Dict[str, Any]] = {
    'kernel': {'dim': 1, 'order': '0,0', 'r_max': 10.0, 'samples': 401, 'c_prime': None,
               'out': 'kernel_profile.csv'},
    'apply': {'op': 'heat', 't': 1.0, 'beta': 1.0, 'k': 1, 'i': 1, 'order': 1, 'zero_mode': None,
              'oracle': False, 'breakpoints': '0,10', 'heights': '1', 'function': 'single_mode',
              'input': None, 'out': 'applied.csv'},
    'seminorm': {'estimator': 'heat', 'alpha': 1.0, 'k': None, 'tmin': 1e-6, 'tmax': 1e2, 'tnum': 200,
                 'ymax': None, 'function': 'single_mode', 'input': None, 'out': 'seminorm.csv'},
    'verify': {'suite': 'default', 'levels': '256,512', 'alphas': None, 'betas': None, 'corpus': 'all',
               'out': 'report.csv'},
    'solve': {'times': '1,1e-2,1e-4,1e-6', 'function': 'single_mode', 'input': None, 'out': 'solution.csv',
              'table': 'solve_table.csv'},
}

ORACLE_KINDS = (SymbolKind.BESSEL_POTENTIAL, SymbolKind.FRACTIONAL_INTEGRAL, SymbolKind.FRACTIONAL_POWER,
                SymbolKind.POISSON)


@dataclass
class RunConfig:
    """Validated configuration of one CLI run."""

    subcommand: str
    grid: GridSpec
    params: Dict[str, Any] = field(default_factory=dict)
    input_path: Optional[Path] = None
    output_path: Optional[Path] = None
    seed: Optional[int] = None
    jobs: int = 1
    verbose: bool = False


def _grid_arguments(parser: argparse.ArgumentParser):
    grid = default('grid')
    parser.add_argument(
        '--dim',
        type=int,
        default=None,
        help=f"Space dimension, 1 or 2 (default: {grid['dim']})"
    )
    parser.add_argument(
        '--N',
        dest='points_per_axis',
        type=int,
        default=None,
        help=f"Grid points per axis, power of two >= 16 (default: {grid['points_per_axis']})"
    )
    parser.add_argument(
        '--L',
        dest='side_length',
        type=float,
        default=None,
        help=f"Side length of the periodic box (default: {grid['side_length']:.6g})"
    )


def _input_arguments(parser: argparse.ArgumentParser, name: str):
    parser.add_argument(
        '--input',
        type=str,
        default=None,
        help='Grid function CSV to read instead of a corpus function'
    )
    parser.add_argument(
        '--function',
        type=str,
        default=None,
        help=f"Corpus function name (default: {DEFAULTS[name]['function']})"
    )


def _out_argument(parser: argparse.ArgumentParser, name: str):
    parser.add_argument(
        '--out',
        type=str,
        default=None,
        help=f"Output CSV path (default: {DEFAULTS[name]['out']})"
    )


def build_parser() -> argparse.ArgumentParser:
    """Argument parser for all subcommands; option defaults are None so file values can apply."""
    parser = argparse.ArgumentParser(
        prog='biharm',
        description='Spectral functional calculus of the biharmonic operator and Lipschitz-space checks'
    )
    parser.add_argument(
        '--config',
        type=str,
        default=None,
        help='YAML config file with one section per subcommand and a grid section'
    )
    parser.add_argument(
        '--jobs',
        type=int,
        default=None,
        help='Worker threads for verify (default: $BIHARM_JOBS, else the number of cores)'
    )
    parser.add_argument(
        '--seed',
        type=int,
        default=None,
        help='Seed of random_trig corpus functions (default: the corpus.yaml value)'
    )
    parser.add_argument(
        '--verbose',
        action='store_true',
        help='Log debug messages to stderr'
    )
    sub = parser.add_subparsers(dest='subcommand', metavar='{' + ','.join(SUBCOMMANDS) + '}')

    kernel = sub.add_parser('kernel', help='Sample the kernel and check its decay bound')
    kernel.add_argument('--dim', type=int, default=None, help='Space dimension (default: 1)')
    kernel.add_argument('--order', type=str, default=None,
                        help="Derivative orders 'l,k' in t and x_1 (default: 0,0)")
    kernel.add_argument('--r-max', dest='r_max', type=float, default=None,
                        help='Largest sampled radius, >= 10 (default: 10)')
    kernel.add_argument('--samples', type=int, default=None, help='Number of radii (default: 401)')
    kernel.add_argument('--c-prime', dest='c_prime', type=float, default=None,
                        help='Decay exponent c\' of the bound (default: c/2)')
    _out_argument(kernel, 'kernel')

    op_names = [kind.value for kind in SymbolKind]
    apply_parser = sub.add_parser('apply', help='Apply a multiplier operator')
    _grid_arguments(apply_parser)
    apply_parser.add_argument('--op', type=str, choices=op_names, default=None,
                              help='Operator (default: heat)')
    apply_parser.add_argument('--t', type=float, default=None, help='Time, > 0 (default: 1)')
    apply_parser.add_argument('--beta', type=float, default=None, help='Order beta, > 0 (default: 1)')
    apply_parser.add_argument('--k', type=int, default=None, help='Time-derivative order, >= 1 (default: 1)')
    apply_parser.add_argument('--i', type=int, default=None, help='Axis, 1-based (default: 1)')
    apply_parser.add_argument('--order', type=int, default=None,
                              help='x-derivative order for partial and mixed (default: 1)')
    apply_parser.add_argument('--zero-mode', dest='zero_mode', type=str,
                              choices=[p.value for p in ZeroModePolicy], default=None,
                              help='Zero-mode policy, not combinable with --oracle '
                                   '(default: project for singular operators, else keep)')
    apply_parser.add_argument('--oracle', action='store_true', default=None,
                              help='Use the quadrature oracle (bessel, fracint, fracpow, poisson)')
    apply_parser.add_argument('--breakpoints', type=str, default=None,
                              help='Step profile breakpoints for laplace-mult (default: 0,10)')
    apply_parser.add_argument('--heights', type=str, default=None,
                              help='Step profile levels for laplace-mult (default: 1)')
    _input_arguments(apply_parser, 'apply')
    _out_argument(apply_parser, 'apply')

    seminorm = sub.add_parser('seminorm', help='Estimate a Lipschitz seminorm')
    _grid_arguments(seminorm)
    seminorm.add_argument(
        '--estimator',
        type=str,
        choices=[e.value for e in Estimator],
        default=None,
        help='Estimator (default: heat)'
    )
    seminorm.add_argument('--alpha', type=float, default=None, help='Regularity index (default: 1)')
    seminorm.add_argument('--k', type=int, default=None, help='Derivative order of the heat scan')
    seminorm.add_argument('--tmin', type=float, default=None, help='Smallest t (default: 1e-6)')
    seminorm.add_argument('--tmax', type=float, default=None, help='Largest t (default: 100)')
    seminorm.add_argument('--tnum', type=int, default=None, help='Number of t nodes (default: 200)')
    seminorm.add_argument('--ymax', type=float, default=None, help='Largest shift, <= L/4 (default: L/4)')
    _input_arguments(seminorm, 'seminorm')
    _out_argument(seminorm, 'seminorm')

    verify = sub.add_parser('verify', help='Run the verification suite')
    verify.add_argument('--dim', type=int, default=None, help='Space dimension (default: 1)')
    verify.add_argument('--L', dest='side_length', type=float, default=None, help='Box side length')
    verify.add_argument('--suite', type=str, default=None,
                        help='Suite name in suite.yaml (default: default)')
    verify.add_argument('--levels', type=str, default=None,
                        help='Comma-separated points per axis, at least two (default: 256,512)')
    verify.add_argument('--alphas', type=str, default=None, help='Override the alpha values of every check')
    verify.add_argument('--betas', type=str, default=None, help='Override the beta values of every check')
    verify.add_argument('--corpus', type=str, default=None,
                        help='Corpus selection or function (default: all)')
    _out_argument(verify, 'verify')

    solve = sub.add_parser('solve', help='Solve u_t = -Delta^2 u from an initial function')
    _grid_arguments(solve)
    solve.add_argument('--times', type=str, default=None,
                       help='Comma-separated output times (default: 1,1e-2,1e-4,1e-6)')
    solve.add_argument('--table', type=str, default=None,
                       help='Convergence table CSV (default: solve_table.csv)')
    _input_arguments(solve, 'solve')
    _out_argument(solve, 'solve')
    return parser


def _parse_floats(key: str, text) -> List[float]:
    if isinstance(text, (list, tuple)):
        items = text
    else:
        items = [s for s in str(text).split(',') if s.strip()]
    try:
        return [float(s) for s in items]
    except ValueError as e:
        raise ConfigError(key, f"expected comma-separated numbers, got {text!r}") from e


def _parse_ints(key: str, text) -> List[int]:
    values = _parse_floats(key, text)
    if any(v != int(v) for v in values):
        raise ConfigError(key, f"expected integers, got {text!r}")
    return [int(v) for v in values]


def _read_config_file(path: Optional[str]) -> Dict[str, Any]:
    if path is None:
        return {}
    try:
        with open(path, 'r') as f:
            data = yaml.safe_load(f) or {}
    except OSError as e:
        raise ConfigError('config', f"cannot read {path}: {e}") from e
    except yaml.YAMLError as e:
        raise ConfigError('config', f"invalid YAML in {path}: {e}") from e
    if not isinstance(data, dict):
        raise ConfigError('config', f"{path} must contain a mapping of sections")
    return data


def _resolve_jobs(flag: Optional[int]) -> int:
    if flag is not None:
        value, key = flag, 'jobs'
    elif os.environ.get('BIHARM_JOBS'):
        key = 'BIHARM_JOBS'
        try:
            value = int(os.environ['BIHARM_JOBS'])
        except ValueError as e:
            raise ConfigError(key, f"expected a positive integer, got {os.environ['BIHARM_JOBS']!r}") from e
    else:
        return os.cpu_count() or 1
    if value < 1:
        raise ConfigError(key, f"must be a positive integer, got {value}")
    return value


def _grid_from(values: Dict[str, Any], file_grid: Dict[str, Any]) -> GridSpec:
    merged = dict(default('grid'))
    merged.update({k: v for k, v in file_grid.items() if v is not None})
    flags = ('dim', 'points_per_axis', 'side_length')
    merged.update({k: values[k] for k in flags if values.get(k) is not None})
    try:
        return GridSpec(int(merged['dim']), int(merged['points_per_axis']), float(merged['side_length']))
    except BiharmError as e:
        raise ConfigError('grid', str(e)) from e


def symbol_from_params(params: Dict[str, Any], dim: int) -> SymbolSpec:
    """
    SymbolSpec for the apply subcommand.

    Raises:
        ConfigError: Naming the offending parameter when a module precondition fails
    """
    try:
        kind = SymbolKind(params['op'])
    except ValueError as e:
        raise ConfigError('op', f"unknown operator {params['op']!r}, expected one of "
                                f"{[k.value for k in SymbolKind]}") from e
    try:
        zero_mode = ZeroModePolicy(params['zero_mode']) if params.get('zero_mode') else None
    except ValueError as e:
        raise ConfigError('zero_mode', f"expected keep, project or forbid, got {params['zero_mode']!r}") from e
    t, beta, k, axis, order = params['t'], params['beta'], params['k'], params['i'], params['order']
    checks = (('t', t is not None and t > 0), ('beta', beta is not None and beta > 0), ('k', k >= 1),
              ('i', 1 <= axis <= dim), ('order', order >= 0))
    needs = {
        SymbolKind.HEAT: ('t',), SymbolKind.HEAT_TIME_DERIV: ('t', 'k'), SymbolKind.POISSON: ('t',),
        SymbolKind.POISSON_TIME_DERIV: ('t', 'k'), SymbolKind.BESSEL_POTENTIAL: ('beta',),
        SymbolKind.FRACTIONAL_INTEGRAL: ('beta',), SymbolKind.FRACTIONAL_POWER: ('beta',),
        SymbolKind.RIESZ_PRE: ('i',), SymbolKind.RIESZ_POST: ('i',),
        SymbolKind.PARTIAL_DERIVATIVE: ('i', 'order'),
        SymbolKind.LAPLACE_MULTIPLIER: (), SymbolKind.MIXED_HEAT_DERIV: ('t', 'i', 'order'),
    }[kind]
    ranges = {'t': 't > 0', 'beta': 'beta > 0', 'k': 'k >= 1', 'i': f"1 <= i <= {dim}",
              'order': 'order >= 0'}
    for key, ok in checks:
        if key in needs and not ok:
            raise ConfigError(key, f"{params[key]!r} is out of range, expected {ranges[key]}")
    profile = None
    if kind is SymbolKind.LAPLACE_MULTIPLIER:
        try:
            profile = StepProfile(tuple(_parse_floats('breakpoints', params['breakpoints'])),
                                  tuple(_parse_floats('heights', params['heights'])))
        except BiharmError as e:
            raise ConfigError('breakpoints', str(e)) from e
    try:
        return SymbolSpec(kind, zero_mode=zero_mode, t=t, k=k, beta=beta, axis=axis, order=order,
                          profile=profile)
    except BiharmError as e:
        raise ConfigError('op', str(e)) from e


def _validate(name: str, params: Dict[str, Any], grid: GridSpec):
    if name == 'kernel':
        if params['dim'] not in (1, 2):
            raise ConfigError('dim', f"expected 1 or 2, got {params['dim']}")
        order = _parse_ints('order', params['order'])
        if len(order) != 2 or min(order) < 0:
            raise ConfigError('order', f"expected 'l,k' with non-negative integers, got {params['order']!r}")
        params['order'] = tuple(order)
        if params['r_max'] < 10:
            raise ConfigError('r_max', f"must be >= 10, got {params['r_max']}")
        if params['samples'] < 2:
            raise ConfigError('samples', f"must be >= 2, got {params['samples']}")
        if params['c_prime'] is not None and not params['c_prime'] > 0:
            raise ConfigError('c_prime', f"must be positive, got {params['c_prime']}")
    elif name == 'apply':
        params['symbol'] = symbol_from_params(params, grid.dim)
        if params['oracle'] and params['symbol'].kind not in ORACLE_KINDS:
            raise ConfigError('oracle', f"no quadrature oracle for {params['op']}, "
                                        f"expected one of {[k.value for k in ORACLE_KINDS]}")
        if params['oracle'] and params.get('zero_mode'):
            raise ConfigError('zero_mode', "quadrature oracles fix their own zero-mode handling, "
                                           "drop --zero-mode or --oracle")
    elif name == 'seminorm':
        if params['estimator'] not in [e.value for e in Estimator]:
            raise ConfigError('estimator', f"expected one of {[e.value for e in Estimator]}, "
                                           f"got {params['estimator']!r}")
        alpha = params['alpha']
        if not alpha > 0:
            raise ConfigError('alpha', f"must be positive, got {alpha}")
        if params['estimator'] == 'diff2' and not 0 < alpha < 2:
            raise ConfigError('alpha', f"diff2 needs 0 < alpha < 2, got {alpha}")
        if params['estimator'] == 'diff1' and not 0 < alpha <= 1:
            raise ConfigError('alpha', f"diff1 needs 0 < alpha <= 1, got {alpha}")
        if not 0 < params['tmin'] < params['tmax']:
            raise ConfigError('tmin', f"need 0 < tmin < tmax, got [{params['tmin']}, {params['tmax']}]")
        if params['tnum'] < 2:
            raise ConfigError('tnum', f"must be >= 2, got {params['tnum']}")
        if params['k'] is not None and params['k'] < int(np.floor(alpha / 4.0)) + 1:
            raise ConfigError('k', f"must be >= [alpha/4] + 1, got {params['k']}")
        quarter = 0.25 * grid.side_length
        if params['ymax'] is not None and not grid.spacing <= params['ymax'] <= quarter:
            raise ConfigError('ymax', f"must lie in [h, L/4] = [{grid.spacing:.6g}, {quarter:.6g}]")
    elif name == 'verify':
        levels = _parse_ints('levels', params['levels'])
        if len(levels) < 2:
            raise ConfigError('levels', f"need at least two grid levels for refinement drift, got {levels}")
        for n in levels:
            if n < 16 or n & (n - 1):
                raise ConfigError('levels', f"each level must be a power of two >= 16, got {n}")
        params['levels'] = levels
        suite_matrix(params['suite'])
        for key in ('alphas', 'betas'):
            if params[key] is not None:
                values = _parse_floats(key, params[key])
                if not values or min(values) <= 0:
                    raise ConfigError(key, f"expected positive values, got {params[key]!r}")
                params[key] = values
    elif name == 'solve':
        times = _parse_floats('times', params['times'])
        if not times or min(times) <= 0:
            raise ConfigError('times', f"expected positive times, got {params['times']!r}")
        params['times'] = times


def parse_config(argv: Optional[Sequence[str]] = None, config_file: Optional[str] = None) -> RunConfig:
    """
    Parse and validate the command line.

    Args:
        argv: Arguments without the program name (default: sys.argv[1:])
        config_file: YAML config used when --config is not given

    Returns:
        RunConfig with every parameter resolved and range-checked

    Raises:
        ConfigError: Naming the offending key and its accepted range
        SystemExit: From argparse for --help (status 0) and unknown subcommands or flags (status 2)
    """
    args = build_parser().parse_args(argv)
    if args.subcommand is None:
        raise ConfigError('subcommand', f"missing, expected one of {list(SUBCOMMANDS)}")
    name = args.subcommand
    file_data = _read_config_file(args.config or config_file)
    section = file_data.get(name, {}) or {}
    if not isinstance(section, dict):
        raise ConfigError(name, 'config section must be a mapping')
    unknown = set(section) - set(DEFAULTS[name])
    if unknown:
        raise ConfigError(name, f"unknown keys {sorted(unknown)}, expected {sorted(DEFAULTS[name])}")

    values = vars(args)
    params = dict(DEFAULTS[name])
    params.update(section)
    params.update({k: values[k] for k in DEFAULTS[name] if values.get(k) is not None})
    grid = _grid_from(values, file_data.get('grid', {}) or {})
    _validate(name, params, grid)

    input_path = Path(params['input']) if params.get('input') else None
    if input_path is not None and not input_path.is_file():
        raise ConfigError('input', f"file not found: {input_path}")
    seed = args.seed if args.seed is not None else file_data.get('seed')
    return RunConfig(
        subcommand=name,
        grid=grid,
        params=params,
        input_path=input_path,
        output_path=Path(params['out']),
        seed=None if seed is None else int(seed),
        jobs=_resolve_jobs(args.jobs if args.jobs is not None else file_data.get('jobs')),
        verbose=bool(args.verbose),
    )


def _initial_function(config: RunConfig) -> GridFunction:
    if config.input_path is not None:
        return load_csv(config.input_path)
    return corpus_function(config.params['function'], config.seed).build(config.grid)


def _csv_text(header: Sequence[str], rows) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator='\n')
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(v) if isinstance(v, float) else v for v in row])
    return buffer.getvalue()


def run_kernel(config: RunConfig) -> int:
    p = config.params
    profile = build_profile(p['dim'], p['order'], p['r_max'], p['samples'])
    decay = check_decay(profile, p['c_prime'])
    atomic_write_text(config.output_path, _csv_text(('r', 'value', 'bound_ratio'),
                                                    profile_rows(profile, decay.c_prime)))
    print(f"kernel dim={profile.dim} order={profile.order}: c={decay.c_exponent:.6f} "
          f"c'={decay.c_prime:.6f} C={decay.observed_C:.6g} at r={decay.argmax_r:.4g} "
          f"({'pass' if decay.passed else 'FAIL'})")
    return 0 if decay.passed else 1


def run_apply(config: RunConfig) -> int:
    p = config.params
    S = p['symbol']
    f = _initial_function(config)
    if p['oracle']:
        if S.kind is SymbolKind.BESSEL_POTENTIAL:
            out = gamma_quadrature_oracle(f, S.beta, bessel=True)
        elif S.kind is SymbolKind.FRACTIONAL_INTEGRAL:
            out = gamma_quadrature_oracle(f.centered(), S.beta, bessel=False)
        elif S.kind is SymbolKind.FRACTIONAL_POWER:
            out = fractional_power_oracle(f, S.beta)
        else:
            out = subordinated_poisson_oracle(f, S.t)
    else:
        out = apply(S, f)
    save_csv(out, config.output_path)
    print(f"{S.kind.value}: sup|f| = {sup_norm(f):.6g}, sup|Tf| = {sup_norm(out):.6g}")
    return 0


def run_seminorm(config: RunConfig) -> int:
    p = config.params
    f = _initial_function(config)
    t_grid = TGrid(p['tmin'], p['tmax'], p['tnum'])
    if p['estimator'] == 'heat':
        est = seminorm_heat(f, p['alpha'], t_grid, p['k'])
    elif p['estimator'] == 'poisson':
        est = seminorm_poisson(f, p['alpha'], t_grid)
    elif p['estimator'] == 'diff2':
        est = seminorm_second_diff(f, p['alpha'], p['ymax'])
    else:
        est = first_difference_modulus(f, p['alpha'], p['ymax'])
    row = (est.estimator.value, float(est.alpha), est.k, float(est.value), float(est.argmax),
           str(est.boundary_flag).lower())
    atomic_write_text(config.output_path,
                      _csv_text(('estimator', 'alpha', 'k', 'value', 'argmax', 'boundary_flag'), [row]))
    print(f"{est.estimator.value} alpha={est.alpha:g} k={est.k}: {est.value:.10g} "
          f"at {est.argmax:.4g}{' (boundary)' if est.boundary_flag else ''}")
    return 0


def _override_matrix(matrix: Dict[str, Any], alphas, betas) -> Dict[str, Any]:
    out = {}
    for key, section in matrix.items():
        if isinstance(section, dict):
            section = dict(section)
            if alphas is not None and 'alphas' in section:
                section['alphas'] = list(alphas)
            if betas is not None and 'betas' in section:
                section['betas'] = list(betas)
        out[key] = section
    return out


def run_verify(config: RunConfig) -> int:
    p = config.params
    matrix = _override_matrix(suite_matrix(p['suite']), p['alphas'], p['betas'])
    reports = run_suite(p['levels'], p['corpus'], matrix=matrix, jobs=config.jobs, dim=config.grid.dim,
                        side_length=config.grid.side_length, seed=config.seed)
    write_report_csv(reports, config.output_path)
    failed = [r for r in reports if not r.passed]
    skipped = sum(1 for r in reports if r.skipped)
    print(f"\n{'=' * 70}")
    print(f"VERIFICATION SUITE '{p['suite']}' on levels {p['levels']}")
    print(f"{'=' * 70}")
    print(f"  Reports: {len(reports)}")
    print(f"  Passed:  {len(reports) - len(failed) - skipped}")
    print(f"  Skipped: {skipped}")
    print(f"  Failed:  {len(failed)}")
    for r in failed:
        print(f"    {r.theorem_id.value} {r.function_name} alpha={r.alpha} beta={r.beta}: "
              f"C={r.observed_constant:.4g} drift={r.refinement_drift:.3g} {r.notes}")
    print(f"{'=' * 70}\n")
    return 1 if failed else 0


def solve_cauchy(config: RunConfig) -> Tuple[GridFunction, List[Tuple[float, float, float]]]:
    """
    u(., t) = W_t f for every configured t.

    Returns:
        (u at the last configured t, rows (t, ||u||_inf / ||f||_inf, ||u - f||_L2))
    """
    f = _initial_function(config)
    sup_f = sup_norm(f)
    rows = []
    u = f
    for t in config.params['times']:
        u = apply(SymbolSpec.heat(t), f)
        ratio = sup_norm(u) / sup_f if sup_f > 0 else 0.0
        rows.append((float(t), ratio, l2_norm(u - f)))
    return u, rows


def solve_failures(rows: Sequence[Tuple[float, float, float]], dim: int) -> List[str]:
    """
    Problems in a solve table.

    The sup ratio must stay below the L1 norm of the kernel, and the L2
    distance to the initial function must not grow as t decreases.

    Returns:
        One message per violation, empty when the table is consistent
    """
    bound = sup_norm_bound_constant(dim)
    failures = [f"t={t:.3g}: sup ratio {ratio:.6f} exceeds {bound:.4f}"
                for t, ratio, _ in rows if ratio > bound * (1.0 + 1e-12)]
    ordered = sorted(rows, key=lambda row: -row[0])
    for (t_prev, _, d_prev), (t, _, d) in zip(ordered, ordered[1:]):
        if d > d_prev * (1.0 + 1e-9) + 1e-14:
            failures.append(f"t={t:.3g}: L2 distance {d:.6e} grew from {d_prev:.6e} at t={t_prev:.3g}")
    return failures


def run_solve(config: RunConfig) -> int:
    u, rows = solve_cauchy(config)
    save_csv(u, config.output_path)
    atomic_write_text(config.params['table'], _csv_text(('t', 'sup_ratio', 'l2_distance'), rows))
    bound = sup_norm_bound_constant(config.grid.dim)
    for t, ratio, dist in rows:
        print(f"t={t:<10.3g} sup ratio={ratio:.6f} (bound {bound:.4f})  L2 distance={dist:.6e}")
    failures = solve_failures(rows, config.grid.dim)
    for message in failures:
        logger.warning("solve: %s", message)
        print(f"FAIL {message}")
    return 1 if failures else 0


HANDLERS = {
    'kernel': run_kernel,
    'apply': run_apply,
    'seminorm': run_seminorm,
    'verify': run_verify,
    'solve': run_solve,
}


def main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and return the exit status.

    0 success, 1 check failure, 2 invalid configuration, 3 runtime error.
    """
    try:
        config = parse_config(argv)
    except SystemExit as e:
        return e.code if isinstance(e.code, int) else (0 if e.code is None else 2)
    except ConfigError as e:
        print(f"biharm: configuration error: {e}", file=sys.stderr)
        return 2

    logging.basicConfig(
        level=logging.DEBUG if config.verbose else logging.WARNING,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
        stream=sys.stderr,
    )
    try:
        return HANDLERS[config.subcommand](config)
    except ConfigError as e:
        print(f"biharm: configuration error: {e}", file=sys.stderr)
        return 2
    except Exception as e:
        logger.error("%s failed: %s", config.subcommand, e, exc_info=config.verbose)
        print(f"biharm: {config.subcommand} failed: {e}", file=sys.stderr)
        return 3


if __name__ == '__main__':
    sys.exit(main())
