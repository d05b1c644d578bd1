"""
Fourier-multiplier operators of the biharmonic functional calculus.

Every operator acts on a GridFunction through its exact symbol on the
discrete spectrum: heat and Poisson semigroups with their time derivatives,
Bessel potentials, fractional integrals and powers, Riesz transforms,
partial derivatives, Laplace-transform-type multipliers and mixed x/t
derivatives of the heat semigroup.

The integral representations of the same operators are kept as oracles:

- gamma_quadrature_oracle: (1/Gamma(a)) Int_0^inf [e^-s] W_s f s^(a-1) ds
- fractional_power_oracle: (1/c_beta) Int_0^inf (W_s - Id)^l f ds / s^(1+a)
- subordinated_poisson_oracle: Poisson semigroup through two Bochner
  subordinations of the heat semigroup

They reuse forward/inverse and the eigenvalues lambda = |xi|^4 of the grid
but none of the symbol code, so agreement between the two paths is an
independent check of both.
"""

import logging
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional, Sequence, Tuple

import numpy as np
from scipy import special

from .config import default
from .errors import DomainError, NonZeroMean, QuadratureDivergence, SingularAtZero
from .grid import GridFunction, GridSpec, SpectralFunction, forward, inverse, sup_norm
from .quadrature import LogQuadrature, gauss_legendre_panels

logger = logging.getLogger(__name__)

# Powers of i, indexed by exponent mod 4
_I_POWERS = (1.0 + 0.0j, 1.0j, -1.0 + 0.0j, -1.0j)

# e^-TAIL_EXPONENT is treated as zero when cutting semigroup integrals
TAIL_EXPONENT = 40.0


class SymbolKind(Enum):
    """Operator families; values double as CLI operator names."""

    HEAT = 'heat'
    HEAT_TIME_DERIV = 'dt'
    POISSON = 'poisson'
    POISSON_TIME_DERIV = 'poisson-dt'
    BESSEL_POTENTIAL = 'bessel'
    FRACTIONAL_INTEGRAL = 'fracint'
    FRACTIONAL_POWER = 'fracpow'
    RIESZ_PRE = 'riesz-pre'
    RIESZ_POST = 'riesz-post'
    PARTIAL_DERIVATIVE = 'partial'
    LAPLACE_MULTIPLIER = 'laplace-mult'
    MIXED_HEAT_DERIV = 'mixed'


class ZeroModePolicy(Enum):
    """Treatment of the xi = 0 coefficient."""

    KEEP = 'keep'
    PROJECT = 'project'
    FORBID = 'forbid'


SINGULAR_KINDS = frozenset({
    SymbolKind.FRACTIONAL_INTEGRAL,
    SymbolKind.RIESZ_PRE,
    SymbolKind.RIESZ_POST,
})

_TIME_KINDS = frozenset({
    SymbolKind.HEAT,
    SymbolKind.HEAT_TIME_DERIV,
    SymbolKind.POISSON,
    SymbolKind.POISSON_TIME_DERIV,
    SymbolKind.MIXED_HEAT_DERIV,
})

_AXIS_KINDS = frozenset({
    SymbolKind.RIESZ_PRE,
    SymbolKind.RIESZ_POST,
    SymbolKind.PARTIAL_DERIVATIVE,
    SymbolKind.MIXED_HEAT_DERIV,
})


@dataclass(frozen=True)
class StepProfile:
    """
    Piecewise-constant a(s) = a_j on [s_{j-1}, s_j), zero beyond s_m.

    The Laplace-type multiplier m(lambda) = lambda Int_0^inf e^(-s lambda) a(s) ds
    is then the finite sum sum_j a_j (e^(-s_{j-1} lambda) - e^(-s_j lambda)).
    """

    breakpoints: Tuple[float, ...]
    levels: Tuple[float, ...]

    def __post_init__(self):
        s = tuple(float(v) for v in self.breakpoints)
        a = tuple(float(v) for v in self.levels)
        if len(a) < 1 or len(s) != len(a) + 1:
            raise DomainError(
                f"need m >= 1 levels and m + 1 breakpoints, got {len(a)} levels, {len(s)} breakpoints"
            )
        if s[0] != 0.0 or any(b <= a_ for a_, b in zip(s[:-1], s[1:])) or not np.isfinite(s[-1]):
            raise DomainError(f"breakpoints must increase strictly from 0 to a finite s_max, got {s}")
        if not all(np.isfinite(a)):
            raise DomainError(f"levels must be finite, got {a}")
        object.__setattr__(self, 'breakpoints', s)
        object.__setattr__(self, 'levels', a)

    @classmethod
    def constant(cls, level: float, s_max: float) -> 'StepProfile':
        return cls((0.0, s_max), (level,))

    @property
    def sup_norm(self) -> float:
        return max(abs(a) for a in self.levels)

    @property
    def s_max(self) -> float:
        return self.breakpoints[-1]

    def laplace_symbol(self, lam: np.ndarray) -> np.ndarray:
        """m(lambda) evaluated in closed form, lambda >= 0."""
        lam = np.asarray(lam, dtype=float)
        decay = np.exp(-np.multiply.outer(lam, np.asarray(self.breakpoints)))
        return (decay[..., :-1] - decay[..., 1:]) @ np.asarray(self.levels)


@dataclass(frozen=True)
class SymbolSpec:
    """
    A multiplier together with its parameters and zero-mode policy.

    Use the named constructors (SymbolSpec.heat(t), SymbolSpec.riesz_pre(1), ...);
    they validate the parameters the kind needs. k is the time-derivative
    order, order the x-derivative order, axis is 1-based.
    """

    kind: SymbolKind
    zero_mode: Optional[ZeroModePolicy] = None
    t: Optional[float] = None
    k: int = 0
    beta: Optional[float] = None
    axis: Optional[int] = None
    order: int = 0
    profile: Optional[StepProfile] = None

    def __post_init__(self):
        kind = self.kind
        if self.zero_mode is None:
            policy = ZeroModePolicy.PROJECT if kind in SINGULAR_KINDS else ZeroModePolicy.KEEP
            object.__setattr__(self, 'zero_mode', policy)
        if kind in SINGULAR_KINDS and self.zero_mode is ZeroModePolicy.KEEP:
            raise DomainError(f"{kind.value} is singular at xi = 0 and needs zero_mode project or forbid")
        if kind in _TIME_KINDS and (self.t is None or not self.t > 0):
            raise DomainError(f"{kind.value} needs t > 0, got t={self.t}")
        if kind in (SymbolKind.HEAT_TIME_DERIV, SymbolKind.POISSON_TIME_DERIV) and self.k < 1:
            raise DomainError(f"{kind.value} needs k >= 1, got k={self.k}")
        if kind is SymbolKind.MIXED_HEAT_DERIV and (self.k < 0 or self.order < 0):
            raise DomainError(f"mixed derivative orders must be >= 0, got j={self.k}, m={self.order}")
        if kind is SymbolKind.PARTIAL_DERIVATIVE and self.order < 1:
            raise DomainError(f"partial derivative order must be >= 1, got {self.order}")
        if kind in (SymbolKind.BESSEL_POTENTIAL, SymbolKind.FRACTIONAL_INTEGRAL,
                    SymbolKind.FRACTIONAL_POWER) and (self.beta is None or not self.beta > 0):
            raise DomainError(f"{kind.value} needs beta > 0, got beta={self.beta}")
        if kind in _AXIS_KINDS and (self.axis is None or self.axis < 1):
            raise DomainError(f"{kind.value} needs a 1-based axis, got axis={self.axis}")
        if kind is SymbolKind.LAPLACE_MULTIPLIER and self.profile is None:
            raise DomainError("laplace-mult needs a StepProfile")

    @classmethod
    def heat(cls, t: float) -> 'SymbolSpec':
        return cls(SymbolKind.HEAT, t=t)

    @classmethod
    def heat_time_deriv(cls, t: float, k: int) -> 'SymbolSpec':
        return cls(SymbolKind.HEAT_TIME_DERIV, t=t, k=k)

    @classmethod
    def poisson(cls, t: float) -> 'SymbolSpec':
        return cls(SymbolKind.POISSON, t=t)

    @classmethod
    def poisson_time_deriv(cls, t: float, k: int) -> 'SymbolSpec':
        return cls(SymbolKind.POISSON_TIME_DERIV, t=t, k=k)

    @classmethod
    def bessel_potential(cls, beta: float) -> 'SymbolSpec':
        return cls(SymbolKind.BESSEL_POTENTIAL, beta=beta)

    @classmethod
    def fractional_integral(cls, beta: float,
                            zero_mode: ZeroModePolicy = ZeroModePolicy.PROJECT) -> 'SymbolSpec':
        return cls(SymbolKind.FRACTIONAL_INTEGRAL, zero_mode=zero_mode, beta=beta)

    @classmethod
    def fractional_power(cls, beta: float) -> 'SymbolSpec':
        return cls(SymbolKind.FRACTIONAL_POWER, beta=beta)

    @classmethod
    def riesz_pre(cls, axis: int, zero_mode: ZeroModePolicy = ZeroModePolicy.PROJECT) -> 'SymbolSpec':
        """d_{x_i} (Delta^2)^(-1/4)."""
        return cls(SymbolKind.RIESZ_PRE, zero_mode=zero_mode, axis=axis)

    @classmethod
    def riesz_post(cls, axis: int, zero_mode: ZeroModePolicy = ZeroModePolicy.PROJECT) -> 'SymbolSpec':
        """(Delta^2)^(-1/4) d_{x_i}."""
        return cls(SymbolKind.RIESZ_POST, zero_mode=zero_mode, axis=axis)

    @classmethod
    def partial_derivative(cls, axis: int, order: int = 1) -> 'SymbolSpec':
        return cls(SymbolKind.PARTIAL_DERIVATIVE, axis=axis, order=order)

    @classmethod
    def laplace_multiplier(cls, profile: StepProfile) -> 'SymbolSpec':
        return cls(SymbolKind.LAPLACE_MULTIPLIER, profile=profile)

    @classmethod
    def mixed_heat_deriv(cls, t: float, j: int, axis: int, m: int) -> 'SymbolSpec':
        """d_{x_axis}^m d_t^j W_t."""
        return cls(SymbolKind.MIXED_HEAT_DERIV, t=t, k=j, axis=axis, order=m)

    def check_dim(self, dim: int):
        if self.kind in _AXIS_KINDS and self.axis > dim:
            raise DomainError(f"axis must be in 1..{dim}, got {self.axis}")


def _evaluate(S: SymbolSpec, xi: Sequence[np.ndarray]) -> np.ndarray:
    """Closed-form symbol on frequency components xi (zero mode of singular kinds set to 0)."""
    norm2 = sum(np.asarray(c, dtype=float) ** 2 for c in xi)
    lam = norm2 ** 2
    norm = np.sqrt(norm2)
    kind = S.kind
    if kind is SymbolKind.HEAT:
        out = np.exp(-S.t * lam)
    elif kind is SymbolKind.HEAT_TIME_DERIV:
        out = (-lam) ** S.k * np.exp(-S.t * lam)
    elif kind is SymbolKind.POISSON:
        out = np.exp(-S.t * norm)
    elif kind is SymbolKind.POISSON_TIME_DERIV:
        out = (-norm) ** S.k * np.exp(-S.t * norm)
    elif kind is SymbolKind.BESSEL_POTENTIAL:
        out = (1.0 + lam) ** (-S.beta / 4.0)
    elif kind is SymbolKind.FRACTIONAL_POWER:
        out = norm ** S.beta
    elif kind is SymbolKind.FRACTIONAL_INTEGRAL:
        safe = np.where(norm > 0, norm, 1.0)
        out = np.where(norm > 0, safe ** -S.beta, 0.0)
    elif kind in (SymbolKind.RIESZ_PRE, SymbolKind.RIESZ_POST):
        # both orderings reduce to i xi_i / |xi| on the discrete spectrum
        safe = np.where(norm > 0, norm, 1.0)
        out = 1j * np.where(norm > 0, xi[S.axis - 1] / safe, 0.0)
    elif kind is SymbolKind.PARTIAL_DERIVATIVE:
        out = _I_POWERS[S.order % 4] * xi[S.axis - 1] ** S.order
    elif kind is SymbolKind.LAPLACE_MULTIPLIER:
        out = S.profile.laplace_symbol(lam)
    elif kind is SymbolKind.MIXED_HEAT_DERIV:
        out = _I_POWERS[S.order % 4] * xi[S.axis - 1] ** S.order * (-lam) ** S.k * np.exp(-S.t * lam)
    else:
        raise DomainError(f"unknown symbol kind {kind!r}")
    return np.asarray(out, dtype=complex)


def symbol_value(S: SymbolSpec, xi) -> complex:
    """
    Symbol of S at a single frequency vector.

    Args:
        S: Operator
        xi: Frequency (scalar in 1-D, one component per axis otherwise)

    Raises:
        SingularAtZero: For fractional integrals and Riesz transforms at xi = 0

    Example:
        >>> abs(symbol_value(SymbolSpec.heat(1.0), 1.0) - np.exp(-1.0)) < 1e-15
        True
    """
    components = np.atleast_1d(np.asarray(xi, dtype=float))
    S.check_dim(components.size)
    if S.kind in SINGULAR_KINDS and not np.any(components):
        raise SingularAtZero(f"{S.kind.value} symbol is singular at xi = 0")
    return complex(_evaluate(S, tuple(components)))


def symbol_array(S: SymbolSpec, spec: GridSpec) -> np.ndarray:
    """
    Symbol of S on the spectral grid of spec (FFT order).

    The array is made conjugate symmetric. This changes only self-conjugate
    Nyquist modes, where an odd symbol acts through its real part, zero.
    """
    S.check_dim(spec.dim)
    values = _evaluate(S, spec.frequencies())
    return 0.5 * (values + np.conj(spec._conjugate_partner(values)))


def _mean_tolerance() -> float:
    return float(default('mean_tolerance'))


def _require_mean_zero(f: GridFunction, what: str):
    bound = _mean_tolerance() * sup_norm(f)
    if abs(f.mean()) > bound:
        raise NonZeroMean(f"{what} needs a mean-zero function, |mean| = {abs(f.mean()):.3e} > {bound:.3e}")


def apply(S: SymbolSpec, f: GridFunction) -> GridFunction:
    """
    Apply the multiplier S to f.

    Args:
        S: Operator
        f: Input function

    Returns:
        inverse(symbol * forward(f)) with the zero mode handled per S.zero_mode

    Raises:
        NonZeroMean: Under ZeroModePolicy.FORBID when |mean f| > 1e-10 sup|f|
        SymmetryViolation: Propagated from inverse
    """
    if S.zero_mode is ZeroModePolicy.FORBID:
        _require_mean_zero(f, S.kind.value)
    F = forward(f)
    coeffs = F.coeffs * symbol_array(S, f.spec)
    if S.zero_mode is ZeroModePolicy.PROJECT:
        c0 = F.zero_mode()
        if abs(c0) > _mean_tolerance() * sup_norm(f):
            logger.warning("%s: dropping zero mode %.3e", S.kind.value, abs(c0))
        coeffs.flat[0] = 0.0
    return inverse(SpectralFunction(f.spec, coeffs))


def heat_time_derivative(f: GridFunction, t: float, k: int) -> GridFunction:
    """d_t^k W_t f, spectrally exact."""
    return apply(SymbolSpec.heat_time_deriv(t, k), f)


def biharmonic(f: GridFunction) -> GridFunction:
    """Delta^2 f = sum_i d_i^4 f + 2 sum_{i<j} d_i^2 d_j^2 f from partial-derivative symbols."""
    dim = f.spec.dim
    out = GridFunction.zeros(f.spec)
    for i in range(1, dim + 1):
        out = out + apply(SymbolSpec.partial_derivative(i, 4), f)
        for j in range(i + 1, dim + 1):
            second = apply(SymbolSpec.partial_derivative(i, 2), f)
            out = out + 2.0 * apply(SymbolSpec.partial_derivative(j, 2), second)
    return out


# Quadrature oracles


def _distinct_eigenvalues(spec: GridSpec) -> Tuple[np.ndarray, np.ndarray]:
    lam = spec.biharmonic_eigenvalues().ravel()
    return np.unique(lam, return_inverse=True)


def _apply_radial_multiplier(f: GridFunction,
                             multiplier: Callable[[np.ndarray], np.ndarray]) -> GridFunction:
    """Multiply each coefficient by multiplier(lambda), evaluated once per distinct lambda."""
    F = forward(f)
    lam, where = _distinct_eigenvalues(f.spec)
    factors = np.asarray(multiplier(lam), dtype=float)[where].reshape(f.spec.shape)
    return inverse(SpectralFunction(f.spec, F.coeffs * factors))


def _log_rule_sum(s: np.ndarray, weights: np.ndarray, mu: np.ndarray, chunk: int = 64) -> np.ndarray:
    """sum_s weights(s) exp(-s mu), accumulated over node chunks to bound memory."""
    out = np.zeros_like(mu)
    for start in range(0, len(s), chunk):
        block = slice(start, start + chunk)
        out += np.exp(-np.multiply.outer(mu, s[block])) @ weights[block]
    return out


def gamma_quadrature_oracle(f: GridFunction, beta: float, bessel: bool = True,
                            quad: Optional[LogQuadrature] = None) -> GridFunction:
    """
    Bessel potential or fractional integral of order beta from the Gamma formula.

    With a = beta/4 and mu = 1 + lambda (Bessel) or lambda (fractional integral),

        mu^(-a) = (1/Gamma(a)) Int_0^inf e^(-s mu) s^(a-1) ds,

    evaluated with log-graded Gauss-Legendre panels. The head (0, s_min)
    is cut where its relative share drops below head_tolerance, the tail
    where Gamma(a, s_max mu_min)/Gamma(a) drops below tail_tolerance.

    Args:
        f: Input function (mean-zero when bessel is False)
        beta: Order, > 0
        bessel: True for (1 + Delta^2)^(-beta/4), False for (Delta^2)^(-beta/4)
        quad: Panel layout; explicit s_min / s_max override the automatic range

    Raises:
        DomainError: If beta <= 0
        NonZeroMean: For the fractional integral of a function with non-zero mean
        QuadratureDivergence: If the tail beyond s_max exceeds tail_tolerance
    """
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if not bessel:
        _require_mean_zero(f, 'fractional integral oracle')
    quad = quad or LogQuadrature.from_defaults()
    a = beta / 4.0
    lam, where = _distinct_eigenvalues(f.spec)
    mu = 1.0 + lam if bessel else lam[lam > 0]
    mu_min, mu_max = float(mu.min()), float(mu.max())

    head_tol = float(default('quadrature', 'head_tolerance'))
    tail_tol = float(default('quadrature', 'tail_tolerance'))
    s_min = quad.s_min or (head_tol * a * special.gamma(a)) ** (1.0 / a) / mu_max
    s_max = quad.s_max or 36.0 / mu_min
    tail = special.gammaincc(a, s_max * mu_min)
    if tail > tail_tol:
        raise QuadratureDivergence(
            f"Gamma tail beyond s_max={s_max:.3e} is {tail:.3e} > {tail_tol:.0e}"
        )
    s, w = quad.rule(s_min, s_max)
    weights = w * s ** (a - 1.0) / special.gamma(a)

    factors = np.zeros_like(lam)
    if bessel:
        factors = _log_rule_sum(s, weights, mu)
    else:
        factors[lam > 0] = _log_rule_sum(s, weights, mu)
    F = forward(f)
    coeffs = F.coeffs * factors[where].reshape(f.spec.shape)
    if not bessel:
        coeffs.flat[0] = 0.0
    return inverse(SpectralFunction(f.spec, coeffs))


def _difference_order(beta: float) -> Tuple[float, int]:
    a = beta / 4.0
    if not beta > 0:
        raise DomainError(f"beta must be positive, got {beta}")
    if abs(a - round(a)) < 1e-12:
        raise DomainError(f"beta must not be a multiple of 4 for the difference-power integral, got {beta}")
    return a, int(np.floor(a)) + 1


def _difference_integral(lam: np.ndarray, a: float, ell: int, s_min: float, s_max: float,
                         quad: LogQuadrature) -> np.ndarray:
    """Int_0^inf (e^(-s lam) - 1)^ell s^(-1-a) ds with exact head and tail corrections."""
    s, w = quad.rule(s_min, s_max)
    weights = w * s ** (-1.0 - a)
    body = np.empty_like(lam)
    for idx, value in enumerate(lam):
        body[idx] = np.dot(np.expm1(-s * value) ** ell, weights)
    # (e^(-s lam) - 1)^ell ~ (-s lam)^ell near 0 and ~ (-1)^ell beyond s_max
    head = (-lam) ** ell * s_min ** (ell - a) / (ell - a)
    tail = (-1.0) ** ell * s_max ** -a / a
    return body + head + tail


def _difference_range(lam_min: float, lam_max: float, a: float, ell: int,
                      quad: LogQuadrature) -> Tuple[float, float]:
    head_tol = float(default('quadrature', 'head_tolerance'))
    s_min = quad.s_min or head_tol ** (1.0 / (ell + 1.0 - a)) / lam_max
    s_max = quad.s_max or TAIL_EXPONENT / lam_min
    tail = np.exp(-s_max * lam_min)
    if tail > float(default('quadrature', 'tail_tolerance')):
        raise QuadratureDivergence(f"difference integral tail e^(-s_max lam_min) = {tail:.3e} too large")
    return s_min, s_max


def fractional_power_constant(beta: float, quad: Optional[LogQuadrature] = None) -> float:
    """
    c_beta = Int_0^inf (e^-u - 1)^l u^(-1-beta/4) du with l = [beta/4] + 1.

    Equals Gamma(-beta/4) when l = 1.

    Raises:
        DomainError: If beta <= 0 or beta is a multiple of 4
    """
    a, ell = _difference_order(beta)
    quad = quad or LogQuadrature.from_defaults()
    s_min, s_max = _difference_range(1.0, 1.0, a, ell, LogQuadrature(quad.nodes_per_panel, quad.panel_width))
    value = float(_difference_integral(np.array([1.0]), a, ell, s_min, s_max, quad)[0])
    logger.debug("c_beta(%.4g) = %.15g (l=%d)", beta, value, ell)
    return value


def fractional_power_oracle(f: GridFunction, beta: float,
                            quad: Optional[LogQuadrature] = None) -> GridFunction:
    """
    (Delta^2)^(beta/4) f = (1/c_beta) Int_0^inf (W_s - Id)^l f ds / s^(1+beta/4).

    The s-integral is taken once per distinct eigenvalue on a common
    log-graded rule covering every active scale.

    Raises:
        DomainError: If beta is a multiple of 4
        QuadratureDivergence: If an explicit s_max leaves a non-negligible tail
    """
    a, ell = _difference_order(beta)
    quad = quad or LogQuadrature.from_defaults()
    c_beta = fractional_power_constant(beta, quad)

    def multiplier(lam: np.ndarray) -> np.ndarray:
        out = np.zeros_like(lam)
        active = lam > 0
        if np.any(active):
            s_min, s_max = _difference_range(lam[active].min(), lam[active].max(), a, ell, quad)
            out[active] = _difference_integral(lam[active], a, ell, s_min, s_max, quad) / c_beta
        return out

    return _apply_radial_multiplier(f, multiplier)


def _subordination_rules(t: float, b_min: float, quad: LogQuadrature):
    """Outer rule in tau and inner rule in u for the iterated subordination integral."""
    width = quad.panel_width
    tau_min = t ** 2 / (4.0 * TAIL_EXPONENT)
    tau_max = quad.s_max or 2.0 * TAIL_EXPONENT / b_min
    tail = np.exp(-tau_max * b_min)
    if tail > float(default('quadrature', 'tail_tolerance')):
        raise QuadratureDivergence(f"subordination tail e^(-tau_max |xi|^2) = {tail:.3e} too large")
    w_lo, w_hi = np.log(tau_min), np.log(tau_max)
    outer = gauss_legendre_panels(
        np.linspace(w_lo, w_hi, int(np.ceil((w_hi - w_lo) / (0.5 * width))) + 1), quad.nodes_per_panel
    )
    # coarse panels where e^(-B/u) is a slow transition, fine ones around the peak u = sqrt(B)
    coarse = np.arange(-60.0, -4.0, width)
    fine = np.linspace(-4.0, np.log(4.0 * TAIL_EXPONENT), int(np.ceil(8.5 / (0.25 * width))) + 1)
    inner = gauss_legendre_panels(np.concatenate([coarse, fine]), quad.nodes_per_panel)
    return outer, inner


def _subordination_multiplier(t: float, lam: np.ndarray, quad: LogQuadrature) -> np.ndarray:
    """e^(-t lam^(1/4)) as the double integral, for lam > 0."""
    b = np.sqrt(lam)
    (w_nodes, w_weights), (v_nodes, v_weights) = _subordination_rules(t, float(b.min()), quad)
    tau = np.exp(w_nodes)
    u = np.exp(v_nodes)
    inner_weights = v_weights * u * np.exp(-u) / np.sqrt(u)
    outer_weights = w_weights * tau * t * np.exp(-t ** 2 / (4.0 * tau)) * tau ** -1.5 / (2.0 * np.pi)
    out = np.zeros_like(lam)
    for tau_k, weight_k in zip(tau, outer_weights):
        # the inner integral is bounded by a multiple of e^(-tau sqrt(lam))
        active = tau_k * b <= 2.0 * TAIL_EXPONENT
        if not np.any(active):
            continue
        B = 0.25 * tau_k ** 2 * lam[active]
        out[active] += weight_k * (np.exp(-np.divide.outer(B, u)) @ inner_weights)
    return out


def subordination_scalar(t: float, lam, quad: Optional[LogQuadrature] = None):
    """
    e^(-t lam^(1/4)) from two nested subordination integrals:

        (1/2pi) Int Int (t e^(-t^2/4tau) / tau^(3/2)) (e^-u / sqrt(u)) e^(-(tau^2/4u) lam) du dtau

    Args:
        t: Poisson time, > 0
        lam: Eigenvalue(s) lambda >= 0; lambda = 0 maps to 1
        quad: Panel layout (nodes per panel, base panel width, optional tau_max as s_max)

    Returns:
        Float for scalar lam, else an array
    """
    if not t > 0:
        raise DomainError(f"t must be positive, got {t}")
    quad = quad or LogQuadrature.from_defaults()
    values = np.atleast_1d(np.asarray(lam, dtype=float))
    if np.any(values < 0):
        raise DomainError("lambda must be non-negative")
    out = np.ones_like(values)
    active = values > 0
    if np.any(active):
        out[active] = _subordination_multiplier(t, values[active], quad)
    return float(out[0]) if np.ndim(lam) == 0 else out


def subordinated_poisson_oracle(f: GridFunction, t: float,
                                quad: Optional[LogQuadrature] = None) -> GridFunction:
    """Poisson semigroup e^(-t (Delta^2)^(1/4)) f through the subordination double integral."""
    return _apply_radial_multiplier(f, lambda lam: subordination_scalar(t, lam, quad))
