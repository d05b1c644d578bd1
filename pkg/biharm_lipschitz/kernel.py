"""
Biharmonic heat kernel W_t(x) = t^(-n/4) g(x / t^(1/4)).

The profile is evaluated directly from its Fourier integral

    d_t^l d_{x_1}^k W_t(x) = (2 pi)^(-n) Int (i eta_1)^k (-|eta|^4)^l exp(i eta.x - t |eta|^4) d eta

reduced to a radial integral: a cosine transform on [0, R] in 1-D, and a
polar double integral (graded Gauss-Legendre in rho, periodic trapezoid in
theta) in 2-D. The Bessel form (1/2pi) Int rho J0(rho |x|) exp(-rho^4) d rho
is kept only as an independent cross-check in 2-D.

The kernel is not positive: g oscillates, so its L1 norm exceeds 1 and
bounds the sup-norm growth of the heat semigroup.
"""

import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import numpy as np
from scipy import integrate, special

from .config import default
from .errors import DomainError, InsufficientRange
from .quadrature import RadialQuadrature, gauss_legendre_panels

logger = logging.getLogger(__name__)

# Gaussian-type decay exponent of |W_1(x)| ~ exp(-c |x|^(4/3))
C_EXPONENT = 3.0 * 2.0 ** (1.0 / 3.0) / 16.0

# Minimal radial range for decay checks
MIN_DECAY_RANGE = 10.0

Order = Tuple[int, int]


def _as_points(x, dim: int) -> Tuple[np.ndarray, bool]:
    pts = np.asarray(x, dtype=float)
    scalar = pts.ndim == 0 if dim == 1 else pts.ndim == 1
    if dim == 1:
        pts = pts.reshape(-1, 1)
    else:
        pts = pts.reshape(-1, 2)
    return pts, scalar


def _check_order(order: Order):
    l, k = order
    if l < 0 or k < 0:
        raise DomainError(f"derivative orders must be non-negative, got (l, k) = {order}")


def _kernel_values(points: np.ndarray, dim: int, order: Order, t: float,
                   quad: RadialQuadrature) -> np.ndarray:
    """Direct quadrature of the Fourier integral at each row of points (shape (P, dim))."""
    l, k = order
    scale = t ** -0.25
    rho, w_rho = quad.rule()
    rho = rho * scale
    w_rho = w_rho * scale
    radial = w_rho * rho ** k * (-(rho ** 4)) ** l * np.exp(-t * rho ** 4)
    shift = 0.5 * np.pi * k
    if dim == 1:
        # (1/2pi) Int_R = (1/pi) Re Int_0^R; Re[(i eta)^k e^{i eta x}] = eta^k cos(eta x + k pi/2)
        phase = np.multiply.outer(points[:, 0], rho) + shift
        return np.cos(phase) @ radial / np.pi
    theta, w_theta = quad.angular_rule()
    cos_t, sin_t = np.cos(theta), np.sin(theta)
    angular_weight = w_theta * cos_t ** k
    radial = radial * rho
    out = np.empty(len(points))
    for idx, (x1, x2) in enumerate(points):
        phase = np.multiply.outer(rho, x1 * cos_t + x2 * sin_t) + shift
        out[idx] = radial @ np.cos(phase) @ angular_weight
    return out / (4.0 * np.pi ** 2)


def eval_g(x, dim: int = 1, quad: Optional[RadialQuadrature] = None):
    """
    Evaluate the kernel profile g (the heat kernel at t = 1).

    Args:
        x: Point (scalar in 1-D, 2-vector in 2-D) or an array of points
        dim: Space dimension, 1 or 2
        quad: Radial quadrature; defaults from defaults.yaml

    Returns:
        g(x) as a float for a single point, else an array

    Example:
        >>> from scipy.special import gamma
        >>> abs(eval_g(0.0) - gamma(1.25) / np.pi) < 1e-12
        True
    """
    return eval_kernel_derivative(x, dim, (0, 0), 1.0, quad)


def eval_heat_kernel(x, t: float, dim: int = 1, quad: Optional[RadialQuadrature] = None):
    """
    W_t(x) = t^(-dim/4) g(x t^(-1/4)).

    Raises:
        DomainError: If t <= 0
    """
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    return t ** (-dim / 4.0) * eval_g(np.asarray(x, dtype=float) * t ** -0.25, dim, quad)


def eval_kernel_derivative(x, dim: int = 1, order: Order = (0, 0), t: float = 1.0,
                           quad: Optional[RadialQuadrature] = None):
    """
    d_t^l d_{x_1}^k W_t(x) from the Fourier integral with multiplier (i eta_1)^k (-|eta|^4)^l.

    The quadrature range is scaled by t^(-1/4) so that the truncation error
    exp(-t R_t^4) is the same for every t.
    """
    if dim not in (1, 2):
        raise DomainError(f"dim must be 1 or 2, got {dim}")
    if t <= 0:
        raise DomainError(f"t must be positive, got {t}")
    _check_order(order)
    quad = quad or RadialQuadrature.from_defaults()
    pts, scalar = _as_points(x, dim)
    values = _kernel_values(pts, dim, order, t, quad)
    return float(values[0]) if scalar else values


def eval_g_bessel(x, quad: Optional[RadialQuadrature] = None):
    """
    2-D profile from the Bessel representation (1/2pi) Int rho J0(rho|x|) exp(-rho^4) d rho.

    Cross-check for eval_g(x, dim=2); x is a 2-vector or an array of them.
    """
    quad = quad or RadialQuadrature.from_defaults()
    pts, scalar = _as_points(x, 2)
    r = np.hypot(pts[:, 0], pts[:, 1])
    rho, w = quad.rule()
    values = special.j0(np.multiply.outer(r, rho)) @ (w * rho * np.exp(-rho ** 4)) / (2.0 * np.pi)
    return float(values[0]) if scalar else values


@dataclass(frozen=True)
class KernelProfile:
    """Samples of d_t^l d_{x_1}^k W_1 along r e_1 for increasing r >= 0."""

    dim: int
    order: Order
    radii: np.ndarray = field(repr=False)
    values: np.ndarray = field(repr=False)
    quad: RadialQuadrature = field(default_factory=RadialQuadrature)

    def __post_init__(self):
        radii = np.asarray(self.radii, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if radii.shape != values.shape or radii.ndim != 1:
            raise DomainError("radii and values must be 1-D arrays of equal length")
        if np.any(np.diff(radii) <= 0) or radii[0] < 0:
            raise DomainError("radii must be non-negative and strictly increasing")
        if not np.all(np.isfinite(values)):
            raise DomainError("profile values must be finite")
        object.__setattr__(self, 'radii', radii)
        object.__setattr__(self, 'values', values)

    @property
    def r_max(self) -> float:
        return float(self.radii[-1])

    def polynomial_weight(self) -> np.ndarray:
        """(1 + r)^(n + k + 4l) for derivative orders, 1 for the plain kernel."""
        l, k = self.order
        if (l, k) == (0, 0):
            return np.ones_like(self.radii)
        return (1.0 + self.radii) ** (self.dim + k + 4 * l)

    def bound_ratios(self, c_prime: float) -> np.ndarray:
        """|value| exp(c' r^(4/3)) times the polynomial weight, per sample."""
        return np.abs(self.values) * np.exp(c_prime * self.radii ** (4.0 / 3.0)) * self.polynomial_weight()


def build_profile(dim: int = 1, order: Order = (0, 0), r_max: Optional[float] = None,
                  samples: Optional[int] = None,
                  quad: Optional[RadialQuadrature] = None) -> KernelProfile:
    """
    Sample the kernel (or one of its derivatives) on a uniform radial grid [0, r_max].

    Args:
        dim: Space dimension
        order: (l, k), time and x_1 derivative orders
        r_max: Largest radius (default from defaults.yaml)
        samples: Number of radii (default from defaults.yaml)
        quad: Radial quadrature
    """
    r_max = float(r_max if r_max is not None else default('kernel', 'r_max'))
    samples = int(samples if samples is not None else default('kernel', 'samples'))
    quad = quad or RadialQuadrature.from_defaults()
    radii = np.linspace(0.0, r_max, samples)
    points = radii if dim == 1 else np.column_stack([radii, np.zeros_like(radii)])
    values = eval_kernel_derivative(points, dim, order, 1.0, quad)
    return KernelProfile(dim, order, radii, values, quad)


@dataclass(frozen=True)
class DecayCheck:
    """Outcome of a kernel decay check."""

    c_exponent: float
    c_prime: float
    order: Order
    observed_C: float
    argmax_r: float
    r_max: float
    passed: bool


def check_decay(profile: KernelProfile, c_prime: Optional[float] = None) -> DecayCheck:
    """
    Test |d_t^l grad^k W_1(r)| <= C (1 + r)^-(n+k+4l) exp(-c' r^(4/3)) on the sampled range.

    The observed constant is the largest sampled ratio; the bound is judged to
    hold when that maximum is finite and attained before the last radius.

    Args:
        profile: Radial profile with r_max >= 10
        c_prime: Exponent c'; defaults to C_EXPONENT / 2

    Raises:
        InsufficientRange: If the profile stops before r = 10
    """
    if profile.r_max < MIN_DECAY_RANGE:
        raise InsufficientRange(
            f"profile covers [0, {profile.r_max}], decay checks need r_max >= {MIN_DECAY_RANGE}"
        )
    c_prime = 0.5 * C_EXPONENT if c_prime is None else float(c_prime)
    ratios = profile.bound_ratios(c_prime)
    idx = int(np.argmax(ratios))
    observed = float(ratios[idx])
    passed = bool(np.isfinite(observed) and (observed == 0.0 or idx < len(ratios) - 1))
    if not passed:
        logger.warning("decay bound with c'=%.4f attained at r_max=%.2f", c_prime, profile.r_max)
    return DecayCheck(C_EXPONENT, c_prime, profile.order, observed, float(profile.radii[idx]),
                      profile.r_max, passed)


def profile_rows(profile: KernelProfile,
                 c_prime: Optional[float] = None) -> List[Tuple[float, float, float]]:
    """Rows (r, value, bound_ratio) for CSV output."""
    c_prime = 0.5 * C_EXPONENT if c_prime is None else float(c_prime)
    ratios = profile.bound_ratios(c_prime)
    return list(zip(profile.radii.tolist(), profile.values.tolist(), ratios.tolist()))


def _radial_measure(dim: int, r: np.ndarray) -> np.ndarray:
    # |S^0| = 2 (both half-lines), |S^1| r = 2 pi r
    return np.full_like(r, 2.0) if dim == 1 else 2.0 * np.pi * r


def kernel_integral(dim: int = 1, quad: Optional[RadialQuadrature] = None,
                    r_max: Optional[float] = None) -> float:
    """
    Int g over R^dim by Gauss-Legendre panels in r; equals 1 up to quadrature error.
    """
    r_max = float(r_max if r_max is not None else default('kernel', 'l1_r_max'))
    panels = int(np.ceil(r_max / 0.5))
    r, w = gauss_legendre_panels(np.linspace(0.0, r_max, panels + 1), 16)
    points = r if dim == 1 else np.column_stack([r, np.zeros_like(r)])
    values = eval_kernel_derivative(points, dim, (0, 0), 1.0, quad)
    return float(np.sum(w * _radial_measure(dim, r) * values))


def kernel_l1_norm(dim: int = 1, order: Order = (0, 0), t: float = 1.0,
                   quad: Optional[RadialQuadrature] = None, r_max: Optional[float] = None,
                   samples: Optional[int] = None) -> float:
    """
    L1 norm of d_t^l grad^k W_t by dense radial trapezoid integration.

    For order (0, 0) this is Int |g| > 1, the sup-norm bound of the heat
    semigroup. In 2-D only k <= 1 is supported (|grad W| is then radial).

    Args:
        dim: Space dimension
        order: (l, k) with l <= 2, k <= 4
        t: Time; the radial range is scaled by t^(1/4)
        quad: Radial quadrature
        r_max: Radial range at t = 1 (default from defaults.yaml)
        samples: Number of radii (default from defaults.yaml)

    Raises:
        DomainError: For orders outside l <= 2, k <= 4 (k <= 1 in 2-D)
    """
    l, k = order
    _check_order(order)
    if l > 2 or k > 4 or (dim == 2 and k > 1):
        raise DomainError(f"L1 norms are available for l <= 2, k <= 4 (k <= 1 in 2-D), got {order}")
    r_max = float(r_max if r_max is not None else default('kernel', 'l1_r_max')) * t ** 0.25
    if samples is None:
        samples = default('kernel', 'l1_samples' if dim == 1 else 'l1_samples_2d')
    samples = int(samples)
    r = np.linspace(0.0, r_max, samples)
    points = r if dim == 1 else np.column_stack([r, np.zeros_like(r)])
    values = np.abs(eval_kernel_derivative(points, dim, order, t, quad))
    return float(integrate.trapezoid(values * _radial_measure(dim, r), r))


def sup_norm_bound_constant(dim: int = 1) -> float:
    """Int |g| + margin: the constant in ||W_t f||_inf <= C ||f||_inf used by the checks."""
    return _cached_l1(dim) + float(default('bands', 'sup_bound_margin'))


_L1_CACHE = {}


def _cached_l1(dim: int) -> float:
    if dim not in _L1_CACHE:
        _L1_CACHE[dim] = kernel_l1_norm(dim)
        logger.debug("Int |g| in dim %d = %.6f", dim, _L1_CACHE[dim])
    return _L1_CACHE[dim]
