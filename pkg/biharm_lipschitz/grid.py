"""
Periodic grid discretization of R^n (n = 1, 2) and its spectral transform.

The box [-L/2, L/2)^n carries N points per axis, x_j = -L/2 + j*h with
h = L/N. Spectral coefficients c_k are normalized so that

    f(x_j) = sum_k c_k exp(i xi_k . x_j),   xi_k = 2*pi*k/L,

with k in {-N/2, ..., N/2-1}^n stored in numpy FFT order. A mode cos(xi_k x)
therefore carries weight 1/2 at +xi_k and -xi_k, and a constant c sits at
xi = 0 with weight c.
"""

import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Tuple, Union

import numpy as np

from .errors import InvalidGrid, NonLatticeShift, SymmetryViolation
from .files import atomic_write_text, format_number

logger = logging.getLogger(__name__)

# Relative tolerance of the conjugate-symmetry test in inverse()
SYMMETRY_TOLERANCE = 1e-10


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L/2, L/2)^dim."""

    dim: int
    points_per_axis: int
    side_length: float

    def __post_init__(self):
        if self.dim not in (1, 2):
            raise InvalidGrid(f"dim must be 1 or 2, got {self.dim}")
        n = self.points_per_axis
        if not isinstance(n, (int, np.integer)) or n < 16 or n & (n - 1):
            raise InvalidGrid(f"points_per_axis must be a power of two >= 16, got {n}")
        if not np.isfinite(self.side_length) or self.side_length <= 0:
            raise InvalidGrid(f"side_length must be positive, got {self.side_length}")

    @property
    def spacing(self) -> float:
        return self.side_length / self.points_per_axis

    @property
    def shape(self) -> Tuple[int, ...]:
        return (self.points_per_axis,) * self.dim

    @property
    def nyquist(self) -> float:
        """Largest representable frequency pi*N/L."""
        return np.pi * self.points_per_axis / self.side_length

    def refined(self) -> 'GridSpec':
        """Same box with twice the points per axis."""
        return GridSpec(self.dim, 2 * self.points_per_axis, self.side_length)

    def axis_points(self) -> np.ndarray:
        return -0.5 * self.side_length + self.spacing * np.arange(self.points_per_axis)

    def coordinates(self) -> Tuple[np.ndarray, ...]:
        """Grid coordinates, one array of shape self.shape per axis."""
        x = self.axis_points()
        if self.dim == 1:
            return (x,)
        return tuple(np.meshgrid(x, x, indexing='ij'))

    def mode_indices(self) -> np.ndarray:
        """Integer frequency indices k along one axis, FFT order."""
        n = self.points_per_axis
        return np.fft.fftfreq(n, d=1.0 / n).astype(np.int64)

    def frequencies(self) -> Tuple[np.ndarray, ...]:
        """Frequency components xi_i on the full spectral grid (FFT order)."""
        xi = 2.0 * np.pi * self.mode_indices() / self.side_length
        if self.dim == 1:
            return (xi,)
        return tuple(np.meshgrid(xi, xi, indexing='ij'))

    def frequency_norm_squared(self) -> np.ndarray:
        """|xi|^2 on the spectral grid."""
        return sum(xi ** 2 for xi in self.frequencies())

    def biharmonic_eigenvalues(self) -> np.ndarray:
        """lambda = |xi|^4, the eigenvalue of Delta^2 on each mode."""
        return self.frequency_norm_squared() ** 2

    def _phase_signs(self) -> np.ndarray:
        # exp(i xi_k x_0) with x_0 = -L/2 equals (-1)^k per axis
        sign = np.where(self.mode_indices() % 2 == 0, 1.0, -1.0)
        if self.dim == 1:
            return sign
        return np.multiply.outer(sign, sign)

    def _conjugate_partner(self, coeffs: np.ndarray) -> np.ndarray:
        idx = (-np.arange(self.points_per_axis)) % self.points_per_axis
        if self.dim == 1:
            return coeffs[idx]
        return coeffs[np.ix_(idx, idx)]


@dataclass(frozen=True)
class GridFunction:
    """Real samples of a function on a GridSpec; immutable."""

    spec: GridSpec
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.size != self.spec.points_per_axis ** self.spec.dim:
            raise InvalidGrid(
                f"expected {self.spec.points_per_axis ** self.spec.dim} samples, got {values.size}"
            )
        if not np.all(np.isfinite(values)):
            raise InvalidGrid("grid function values must be finite")
        values = values.reshape(self.spec.shape)
        values.setflags(write=False)
        object.__setattr__(self, 'values', values)

    @classmethod
    def from_callable(cls, spec: GridSpec, func) -> 'GridFunction':
        """Sample func(*coordinates) on the grid."""
        return cls(spec, func(*spec.coordinates()))

    @classmethod
    def zeros(cls, spec: GridSpec) -> 'GridFunction':
        return cls(spec, np.zeros(spec.shape))

    def mean(self) -> float:
        return float(np.mean(self.values))

    def centered(self) -> 'GridFunction':
        """Copy with the mean removed (zero DC coefficient)."""
        return GridFunction(self.spec, self.values - np.mean(self.values))

    def _check_compatible(self, other: 'GridFunction'):
        if self.spec != other.spec:
            raise InvalidGrid(f"grid mismatch: {self.spec} vs {other.spec}")

    def __add__(self, other: 'GridFunction') -> 'GridFunction':
        self._check_compatible(other)
        return GridFunction(self.spec, self.values + other.values)

    def __sub__(self, other: 'GridFunction') -> 'GridFunction':
        self._check_compatible(other)
        return GridFunction(self.spec, self.values - other.values)

    def __mul__(self, scalar: float) -> 'GridFunction':
        return GridFunction(self.spec, float(scalar) * self.values)

    __rmul__ = __mul__

    def __neg__(self) -> 'GridFunction':
        return GridFunction(self.spec, -self.values)


@dataclass(frozen=True)
class SpectralFunction:
    """Spectral coefficients c_k of a grid function (FFT order)."""

    spec: GridSpec
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=complex).reshape(self.spec.shape)
        coeffs.setflags(write=False)
        object.__setattr__(self, 'coeffs', coeffs)

    def zero_mode(self) -> complex:
        return complex(self.coeffs.flat[0])

    def symmetry_defect(self) -> float:
        """Largest |c_k - conj(c_-k)| relative to max |c_k| (0 for the zero function)."""
        scale = np.max(np.abs(self.coeffs))
        if scale == 0:
            return 0.0
        partner = self.spec._conjugate_partner(self.coeffs)
        return float(np.max(np.abs(self.coeffs - np.conj(partner))) / scale)


def forward(f: GridFunction) -> SpectralFunction:
    """
    Discrete Fourier coefficients of a grid function.

    Args:
        f: Sampled function

    Returns:
        SpectralFunction with f(x_j) = sum_k c_k exp(i xi_k . x_j), exactly
        conjugate symmetric (c_-k == conj(c_k) bit for bit)

    Example:
        >>> spec = GridSpec(1, 16, 2 * np.pi)
        >>> bool(np.isclose(forward(GridFunction.from_callable(spec, np.cos)).coeffs[1], 0.5))
        True
    """
    spec = f.spec
    raw = np.fft.fftn(f.values) / spec.points_per_axis ** spec.dim * spec._phase_signs()
    # fftn leaves rounding-level asymmetry; products with conjugate-symmetric
    # symbols stay exactly symmetric only if the input is
    return SpectralFunction(spec, 0.5 * (raw + np.conj(spec._conjugate_partner(raw))))


def inverse(F: SpectralFunction) -> GridFunction:
    """
    Real grid function with the given spectral coefficients.

    Raises:
        SymmetryViolation: If the coefficients are not conjugate symmetric
            within SYMMETRY_TOLERANCE relative to the largest coefficient
    """
    defect = F.symmetry_defect()
    if defect > SYMMETRY_TOLERANCE:
        raise SymmetryViolation(
            f"coefficients are not conjugate symmetric (relative defect {defect:.3e} "
            f"> {SYMMETRY_TOLERANCE:.0e})"
        )
    spec = F.spec
    raw = F.coeffs * spec._phase_signs() * spec.points_per_axis ** spec.dim
    return GridFunction(spec, np.real(np.fft.ifftn(raw)))


def sup_norm(f: GridFunction) -> float:
    """Maximum of |f| over the grid samples."""
    return float(np.max(np.abs(f.values)))


def l2_norm(f: GridFunction) -> float:
    """Discrete L2 norm sqrt(h^dim * sum |f|^2)."""
    return float(np.sqrt(f.spec.spacing ** f.spec.dim * np.sum(f.values ** 2)))


def spectral_l2_norm(F: SpectralFunction) -> float:
    """L2 norm from the coefficients, sqrt(L^dim * sum |c_k|^2) (Plancherel)."""
    return float(np.sqrt(F.spec.side_length ** F.spec.dim * np.sum(np.abs(F.coeffs) ** 2)))


def lattice_steps(spec: GridSpec, y: Union[float, Sequence[float]]) -> Tuple[int, ...]:
    """
    Convert a shift vector to integer grid steps.

    Raises:
        NonLatticeShift: If some component is not an integer multiple of h
    """
    components = np.atleast_1d(np.asarray(y, dtype=float))
    if components.size != spec.dim:
        raise NonLatticeShift(f"shift {y!r} has {components.size} components, grid has dim {spec.dim}")
    steps = components / spec.spacing
    rounded = np.round(steps)
    if np.any(np.abs(steps - rounded) > 1e-9 * np.maximum(1.0, np.abs(steps))):
        raise NonLatticeShift(f"shift {y!r} is not a multiple of the grid spacing {spec.spacing!r}")
    return tuple(int(s) for s in rounded)


def shift_by_steps(f: GridFunction, steps: Sequence[int]) -> GridFunction:
    """f(. + steps*h), exact circular shift."""
    values = f.values
    for axis, m in enumerate(steps):
        if m:
            values = np.roll(values, -m, axis=axis)
    return GridFunction(f.spec, values)


def shift(f: GridFunction, y: Union[float, Sequence[float]]) -> GridFunction:
    """
    Periodic translate x -> f(x + y).

    Args:
        f: Grid function
        y: Shift (scalar in 1-D, one component per axis otherwise), a lattice vector

    Raises:
        NonLatticeShift: If y is not a lattice vector
    """
    return shift_by_steps(f, lattice_steps(f.spec, y))


def save_csv(f: GridFunction, path: Union[str, Path]) -> Path:
    """
    Write f as CSV: header '# dim,N,L' with the grid parameters, then one sample per line.

    Samples are written row-major with 17 significant digits; the write is atomic.
    """
    spec = f.spec
    lines = [f"# {spec.dim},{spec.points_per_axis},{format_number(spec.side_length)}"]
    lines.extend(format_number(v) for v in f.values.ravel())
    return atomic_write_text(path, '\n'.join(lines) + '\n')


def load_csv(path: Union[str, Path]) -> GridFunction:
    """
    Read a grid function written by save_csv.

    Raises:
        InvalidGrid: If the header is missing or inconsistent with the samples
    """
    path = Path(path)
    with open(path, 'r') as fh:
        header = fh.readline().strip()
    if not header.startswith('#'):
        raise InvalidGrid(f"{path}: missing '# dim,N,L' header")
    try:
        dim_s, n_s, length_s = header.lstrip('#').split(',')
        spec = GridSpec(int(dim_s), int(n_s), float(length_s))
    except ValueError as e:
        raise InvalidGrid(f"{path}: malformed header {header!r}") from e
    values = np.loadtxt(path, comments='#', ndmin=1)
    return GridFunction(spec, values)
