"""
Lipschitz seminorms and the test corpus.

Three estimators of the Lipschitz class Lambda^alpha of a sampled function:

- S_alpha: sup_t t^(k - alpha/4) ||d_t^k W_t f||_inf, W_t the biharmonic heat semigroup
- S~_alpha: sup_t t^(k - alpha) ||d_t^k P_t f||_inf, P_t the Poisson semigroup
- N_alpha: sup_y ||f(. + y) + f(. - y) - 2 f||_inf / |y|^alpha, 0 < alpha < 2

Semigroup scans run over a log-spaced t grid, difference scans over lattice
shifts. An estimate whose maximum sits on the edge of the scanned range is
flagged: the continuum supremum may lie outside it.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from .calculus import SymbolSpec, symbol_array
from .config import default, load_yaml
from .errors import ConfigError, DomainError, SpectrumOverflow
from .grid import GridFunction, GridSpec, SpectralFunction, forward, inverse, shift_by_steps, sup_norm

logger = logging.getLogger(__name__)


class Estimator(Enum):
    HEAT_S = 'heat'
    POISSON_S = 'poisson'
    SECOND_DIFF_N = 'diff2'
    FIRST_DIFF = 'diff1'


@dataclass(frozen=True)
class TGrid:
    """Log-spaced sampling of t in [t_min, t_max]."""

    t_min: float = 1e-6
    t_max: float = 1e2
    num: int = 200

    def __post_init__(self):
        if not 0 < self.t_min < self.t_max or self.num < 2:
            raise DomainError(
                f"need 0 < t_min < t_max and num >= 2, got [{self.t_min}, {self.t_max}], num={self.num}"
            )

    @classmethod
    def from_defaults(cls) -> 'TGrid':
        section = default('t_grid')
        return cls(float(section['t_min']), float(section['t_max']), int(section['num']))

    def nodes(self) -> np.ndarray:
        return np.geomspace(self.t_min, self.t_max, self.num)


@dataclass(frozen=True)
class SeminormEstimate:
    """
    Result of one seminorm scan.

    argmax is the t (semigroup estimators) or |y| (difference estimators)
    attaining the maximum; sample_range the scanned interval. m is the
    x-derivative order of mixed scans (0 otherwise).
    """

    alpha: float
    k: int
    estimator: Estimator
    value: float
    argmax: float
    boundary_flag: bool
    sample_range: Tuple[float, float]
    m: int = 0


def _estimate(alpha: float, k: int, estimator: Estimator, samples: np.ndarray, values: np.ndarray,
              edge: Sequence[bool], m: int = 0) -> SeminormEstimate:
    idx = int(np.argmax(values))
    value = float(values[idx])
    flagged = bool(value > 0 and edge[idx])
    if flagged:
        logger.debug("%s estimate for alpha=%.3g attained at the edge %.3e", estimator.value, alpha,
                     samples[idx])
    return SeminormEstimate(alpha, k, estimator, value, float(samples[idx]), flagged,
                            (float(np.min(samples)), float(np.max(samples))), m)


def _semigroup_scan(f: GridFunction, nodes: np.ndarray, symbol_at: Callable[[float], SymbolSpec],
                    exponent: float) -> np.ndarray:
    """t^exponent ||S(t) f||_inf on every node, one forward transform shared by all t."""
    F = forward(f)
    values = np.empty(len(nodes))
    for idx, t in enumerate(nodes):
        coeffs = F.coeffs * symbol_array(symbol_at(t), f.spec)
        values[idx] = t ** exponent * sup_norm(inverse(SpectralFunction(f.spec, coeffs)))
    return values


def _edge_mask(n: int) -> np.ndarray:
    edge = np.zeros(n, dtype=bool)
    edge[[0, -1]] = True
    return edge


def _check_alpha(alpha: float):
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")


def seminorm_heat(f: GridFunction, alpha: float, t_grid: Optional[TGrid] = None,
                  k: Optional[int] = None) -> SeminormEstimate:
    """
    S_alpha[f] = max over t of t^(k - alpha/4) ||d_t^k W_t f||_inf.

    Args:
        f: Sampled function
        alpha: Regularity index, > 0
        t_grid: Sampling of t (default from defaults.yaml)
        k: Time-derivative order, default [alpha/4] + 1; larger values are allowed

    Raises:
        DomainError: If alpha <= 0 or k <= alpha/4

    Example:
        >>> spec = GridSpec(1, 512, 4 * np.pi)
        >>> abs(seminorm_heat(GridFunction.from_callable(spec, np.cos), 1.0).value - 0.3807) < 0.01
        True
    """
    _check_alpha(alpha)
    k_min = int(np.floor(alpha / 4.0)) + 1
    k = k_min if k is None else int(k)
    if k < k_min:
        raise DomainError(f"k must be >= [alpha/4] + 1 = {k_min}, got {k}")
    t_grid = t_grid or TGrid.from_defaults()
    nodes = t_grid.nodes()
    values = _semigroup_scan(f, nodes, lambda t: SymbolSpec.heat_time_deriv(t, k), k - alpha / 4.0)
    return _estimate(alpha, k, Estimator.HEAT_S, nodes, values, _edge_mask(len(nodes)))


def seminorm_poisson(f: GridFunction, alpha: float, t_grid: Optional[TGrid] = None) -> SeminormEstimate:
    """S~_alpha[f] = max over t of t^(k - alpha) ||d_t^k P_t f||_inf with k = [alpha] + 1."""
    _check_alpha(alpha)
    k = int(np.floor(alpha)) + 1
    t_grid = t_grid or TGrid.from_defaults()
    nodes = t_grid.nodes()
    values = _semigroup_scan(f, nodes, lambda t: SymbolSpec.poisson_time_deriv(t, k), k - alpha)
    return _estimate(alpha, k, Estimator.POISSON_S, nodes, values, _edge_mask(len(nodes)))


def mixed_derivative_bound(f: GridFunction, alpha: float, m: int, j: int, axis: int = 1,
                           t_grid: Optional[TGrid] = None) -> SeminormEstimate:
    """
    max over t of t^(m/4 + j - alpha/4) ||d_{x_axis}^m d_t^j W_t f||_inf.

    Raises:
        DomainError: Unless m/4 + j >= [alpha/4] + 1
    """
    _check_alpha(alpha)
    k_min = int(np.floor(alpha / 4.0)) + 1
    if m < 0 or j < 0 or m / 4.0 + j < k_min:
        raise DomainError(f"need m/4 + j >= [alpha/4] + 1 = {k_min}, got m={m}, j={j}")
    t_grid = t_grid or TGrid.from_defaults()
    nodes = t_grid.nodes()
    values = _semigroup_scan(f, nodes, lambda t: SymbolSpec.mixed_heat_deriv(t, j, axis, m),
                             m / 4.0 + j - alpha / 4.0)
    return _estimate(alpha, j, Estimator.HEAT_S, nodes, values, _edge_mask(len(nodes)), m=m)


def _shift_directions(dim: int) -> List[Tuple[int, ...]]:
    if dim == 1:
        return [(1,)]
    return [(1, 0), (0, 1), (1, 1), (1, -1)]


def difference_profile(f: GridFunction, order: int, y_max: Optional[float] = None
                       ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """
    Sup norms of first (order=1) or second (order=2) differences over lattice shifts.

    Shifts are multiples of h along each axis and, in 2-D, the two
    diagonals, with 0 < |y| <= y_max.

    Returns:
        (lengths |y|, sup norms, edge mask marking the largest shift per direction)

    Raises:
        DomainError: If y_max exceeds L/4 or is smaller than h
    """
    spec = f.spec
    quarter = 0.25 * spec.side_length
    y_max = quarter if y_max is None else float(y_max)
    if y_max > quarter * (1.0 + 1e-12) or y_max < spec.spacing:
        raise DomainError(f"y_max must lie in [h, L/4] = [{spec.spacing:.6g}, {quarter:.6g}], got {y_max}")
    lengths, sups, edge = [], [], []
    for direction in _shift_directions(spec.dim):
        step_length = spec.spacing * float(np.linalg.norm(direction))
        count = int(np.floor(y_max / step_length * (1.0 + 1e-12)))
        for m in range(1, count + 1):
            forward_shift = shift_by_steps(f, [m * d for d in direction])
            if order == 1:
                diff = forward_shift - f
            else:
                diff = forward_shift + shift_by_steps(f, [-m * d for d in direction]) - 2.0 * f
            lengths.append(m * step_length)
            sups.append(sup_norm(diff))
            edge.append(m == count)
    return np.array(lengths), np.array(sups), np.array(edge, dtype=bool)


def seminorm_second_diff(f: GridFunction, alpha: float, y_max: Optional[float] = None) -> SeminormEstimate:
    """
    N_alpha[f] = max over lattice shifts of ||f(. + y) + f(. - y) - 2 f||_inf / |y|^alpha.

    Args:
        f: Sampled function
        alpha: In (0, 2)
        y_max: Largest shift length, at most L/4 (the default)

    Raises:
        DomainError: If alpha is outside (0, 2) or y_max outside [h, L/4]
    """
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2) for second differences, got {alpha}")
    lengths, sups, edge = difference_profile(f, 2, y_max)
    return _estimate(alpha, 2, Estimator.SECOND_DIFF_N, lengths, sups / lengths ** alpha, edge)


def first_difference_modulus(f: GridFunction, alpha: float,
                             y_max: Optional[float] = None) -> SeminormEstimate:
    """
    max over lattice shifts of ||f(. + y) - f||_inf / |y|^alpha, 0 < alpha <= 1.

    Raises:
        DomainError: If alpha is outside (0, 1]
    """
    if not 0 < alpha <= 1:
        raise DomainError(f"alpha must lie in (0, 1] for first differences, got {alpha}")
    lengths, sups, edge = difference_profile(f, 1, y_max)
    return _estimate(alpha, 1, Estimator.FIRST_DIFF, lengths, sups / lengths ** alpha, edge)


# Corpus


@dataclass(frozen=True)
class CorpusFunction:
    """A named test function: builder kind, parameters and designed regularity."""

    name: str
    kind: str
    params: Dict[str, Any] = field(default_factory=dict)
    nominal_alpha: Optional[float] = None

    def build(self, spec: GridSpec) -> GridFunction:
        """Sample the function on spec."""
        if self.kind not in _BUILDERS:
            raise ConfigError(
                'kind', f"unknown corpus builder {self.kind!r}, expected one of {sorted(_BUILDERS)}"
            )
        try:
            return _BUILDERS[self.kind](spec, **self.params)
        except TypeError as e:
            raise ConfigError(self.name, f"bad parameters {self.params!r} for {self.kind}: {e}") from e


_BUILDERS: Dict[str, Callable[..., GridFunction]] = {}


def register_builder(kind: str):
    """Decorator registering a corpus builder under kind."""

    def decorator(func: Callable[..., GridFunction]):
        _BUILDERS[kind] = func
        return func

    return decorator


def _check_frequency(spec: GridSpec, xi: float, what: str):
    if xi > 0.5 * spec.nyquist:
        raise SpectrumOverflow(
            f"{what}: frequency {xi:.6g} exceeds Nyquist/2 = {0.5 * spec.nyquist:.6g} "
            f"(N={spec.points_per_axis})"
        )
    periods = xi * spec.side_length / (2.0 * np.pi)
    if abs(periods - round(periods)) > 1e-9 * max(1.0, periods):
        raise DomainError(
            f"{what}: frequency {xi:.6g} is not periodic on a box of side {spec.side_length:.6g}"
        )


@register_builder('single_mode')
def single_mode(spec: GridSpec, xi0: float = 1.0, axis: int = 1) -> GridFunction:
    """cos(xi0 x_axis)."""
    _check_frequency(spec, xi0, 'single_mode')
    coords = spec.coordinates()
    return GridFunction(spec, np.cos(xi0 * coords[axis - 1]))


def weierstrass_octaves(spec: GridSpec, xi_base: float = 1.0) -> int:
    """Largest J with 2^J xi_base <= Nyquist/2 (negative when xi_base itself is too high)."""
    return int(np.floor(np.log2(0.5 * spec.nyquist / xi_base) + 1e-12))


@register_builder('weierstrass')
def weierstrass(spec: GridSpec, alpha: float, terms: Optional[int] = None,
                xi_base: float = 1.0) -> GridFunction:
    """
    sum_{j=0}^{terms} 2^(-j alpha) cos(2^j xi_base x), summed over the axes in 2-D.

    Args:
        spec: Grid to sample on
        alpha: Designed regularity index
        terms: Highest octave J; default the largest J with 2^J xi_base <= Nyquist/2,
            so each refinement adds one octave
        xi_base: Base frequency

    Raises:
        SpectrumOverflow: If 2^terms xi_base exceeds Nyquist/2
    """
    if terms is None:
        terms = max(weierstrass_octaves(spec, xi_base), 0)
    _check_frequency(spec, 2.0 ** terms * xi_base, 'weierstrass')
    values = np.zeros(spec.shape)
    for x in spec.coordinates():
        for j in range(terms + 1):
            values += 2.0 ** (-j * alpha) * np.cos(2.0 ** j * xi_base * x)
    return GridFunction(spec, values)


@register_builder('gaussian_bump')
def gaussian_bump(spec: GridSpec, sigma: float, center=0.0) -> GridFunction:
    """
    exp(-|x - center|^2 / (2 sigma^2)).

    Raises:
        DomainError: If the bump comes closer than 6 sigma to the box boundary
    """
    centers = np.broadcast_to(np.asarray(center, dtype=float), (spec.dim,))
    half = 0.5 * spec.side_length
    margin = float(np.min(half - np.abs(centers)))
    if not sigma > 0 or margin < 6.0 * sigma:
        raise DomainError(
            f"gaussian_bump needs sigma > 0 and a 6 sigma margin, got sigma={sigma}, margin={margin:.4g}"
        )
    r2 = sum((x - c) ** 2 for x, c in zip(spec.coordinates(), centers))
    return GridFunction(spec, np.exp(-0.5 * r2 / sigma ** 2))


@register_builder('random_trig')
def random_trig(spec: GridSpec, seed: int, modes: int = 16, decay: float = 1.5) -> GridFunction:
    """
    Random trigonometric polynomial with coefficients ~ N(0,1) (1 + |k|)^(-decay).

    Modes 1 <= |k|_inf <= modes of the fundamental 2 pi / L. The draws from
    numpy's default_rng(seed) fill the block -modes..modes per axis, so a
    seed names the same function on every grid of the same box.
    """
    _check_frequency(spec, modes * 2.0 * np.pi / spec.side_length, 'random_trig')
    rng = np.random.default_rng(seed)
    k = np.arange(-modes, modes + 1)
    block = (k.size,) * spec.dim
    grids = np.meshgrid(*([k] * spec.dim), indexing='ij')
    k_inf = np.max(np.abs(np.stack(grids)), axis=0)
    k_norm = np.sqrt(sum(g.astype(float) ** 2 for g in grids))
    draws = rng.standard_normal(block) + 1j * rng.standard_normal(block)
    local = np.where(k_inf >= 1, draws * (1.0 + k_norm) ** -decay, 0.0)

    coeffs = np.zeros(spec.shape, dtype=complex)
    slots = k % spec.points_per_axis
    coeffs[np.ix_(*([slots] * spec.dim))] = local
    coeffs = 0.5 * (coeffs + np.conj(spec._conjugate_partner(coeffs)))
    return inverse(SpectralFunction(spec, coeffs))


def corpus_function(name: str, seed: Optional[int] = None) -> CorpusFunction:
    """
    Look up a named function in corpus.yaml.

    Args:
        name: Entry name
        seed: Overrides the seed of random_trig entries

    Raises:
        ConfigError: If the name is unknown
    """
    entries = load_yaml('corpus.yaml').get('functions', {})
    if name not in entries:
        raise ConfigError('corpus', f"unknown function {name!r}, expected one of {sorted(entries)}")
    entry = entries[name]
    params = dict(entry.get('params', {}))
    if seed is not None and entry['kind'] == 'random_trig':
        params['seed'] = int(seed)
    return CorpusFunction(name, entry['kind'], params, entry.get('nominal_alpha'))


def corpus_names(selection: str = 'all') -> List[str]:
    """Function names of a selection in corpus.yaml, or [selection] for a single entry."""
    data = load_yaml('corpus.yaml')
    selections = data.get('selections', {})
    if selection in selections:
        return list(selections[selection])
    if selection in data.get('functions', {}):
        return [selection]
    known = sorted(selections) + sorted(data.get('functions', {}))
    raise ConfigError('corpus', f"unknown selection {selection!r}, expected one of {known}")


def corpus(spec: GridSpec, name: str = 'all',
           seed: Optional[int] = None) -> List[Tuple[CorpusFunction, GridFunction]]:
    """
    Sampled corpus functions.

    Args:
        spec: Grid to sample on
        name: A selection ('all', 'full') or a single function name
        seed: Overrides the seed of random_trig entries

    Returns:
        List of (CorpusFunction, GridFunction) in selection order
    """
    functions = [corpus_function(n, seed) for n in corpus_names(name)]
    return [(fn, fn.build(spec)) for fn in functions]
