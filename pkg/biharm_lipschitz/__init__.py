"""
biharm_lipschitz - Spectral functional calculus of the biharmonic operator on periodic grids.

Public API:
    GridSpec, GridFunction: Periodic grids and sampled functions
    SymbolSpec, apply: Fourier-multiplier operators of the calculus
    eval_g, check_decay: Heat kernel profile and its decay bound
    seminorm_heat, seminorm_poisson, seminorm_second_diff: Lipschitz seminorm estimators
    run_suite, write_report_csv: Verification harness
"""

from .calculus import StepProfile, SymbolKind, SymbolSpec, ZeroModePolicy, apply
from .grid import GridFunction, GridSpec, forward, inverse, load_csv, save_csv, sup_norm
from .kernel import build_profile, check_decay, eval_g, eval_heat_kernel
from .lipschitz import TGrid, corpus, seminorm_heat, seminorm_poisson, seminorm_second_diff
from .verify import CheckReport, TheoremId, run_suite, write_report_csv

__all__ = [
    'GridSpec', 'GridFunction', 'forward', 'inverse', 'sup_norm', 'save_csv', 'load_csv',
    'SymbolKind', 'SymbolSpec', 'StepProfile', 'ZeroModePolicy', 'apply',
    'eval_g', 'eval_heat_kernel', 'build_profile', 'check_decay',
    'TGrid', 'corpus', 'seminorm_heat', 'seminorm_poisson', 'seminorm_second_diff',
    'CheckReport', 'TheoremId', 'run_suite', 'write_report_csv',
]
