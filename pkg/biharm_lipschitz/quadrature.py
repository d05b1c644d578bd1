"""
Composite Gauss-Legendre rules.

Two families are used across the package:

- RadialQuadrature: panels on [0, R] whose widths grow geometrically away
  from 0, for the Fourier integrals defining the kernel profile g.
- LogQuadrature: panels of fixed width in u = ln(s), i.e. exponentially
  graded panels in s, for the semigroup integrals over s in (0, inf) used
  by the oracles in biharm_lipschitz.calculus.
"""

import logging
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional, Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .config import default
from .errors import BadQuadrature

logger = logging.getLogger(__name__)

# Width ratio between consecutive radial panels
RADIAL_GROWTH = 1.1


@lru_cache(maxsize=64)
def _gauss_legendre(n: int) -> Tuple[np.ndarray, np.ndarray]:
    return leggauss(n)


def gauss_legendre_panels(breakpoints: np.ndarray, nodes_per_panel: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite Gauss-Legendre rule over consecutive panels.

    Args:
        breakpoints: Increasing panel boundaries b_0 < b_1 < ... < b_P
        nodes_per_panel: Gauss-Legendre order on every panel

    Returns:
        (nodes, weights) concatenated over the panels in increasing order
    """
    x, w = _gauss_legendre(nodes_per_panel)
    a = np.asarray(breakpoints[:-1], dtype=float)[:, None]
    b = np.asarray(breakpoints[1:], dtype=float)[:, None]
    half = 0.5 * (b - a)
    nodes = (a + half * (x[None, :] + 1.0)).ravel()
    weights = (half * w[None, :]).ravel()
    return nodes, weights


@dataclass(frozen=True)
class RadialQuadrature:
    """Gauss-Legendre rule on [0, truncation] graded toward 0."""

    truncation: float = 8.0
    nodes: int = 1024
    panels: int = 16
    angular_points: int = 256

    def __post_init__(self):
        if self.truncation < 3 or self.nodes < 64:
            raise BadQuadrature(
                f"need truncation >= 3 and nodes >= 64, got truncation={self.truncation}, "
                f"nodes={self.nodes}"
            )
        if self.panels < 1 or self.nodes % self.panels:
            raise BadQuadrature(f"nodes ({self.nodes}) must be a multiple of panels ({self.panels})")
        if self.angular_points < 16:
            raise BadQuadrature(f"angular_points must be >= 16, got {self.angular_points}")

    @classmethod
    def from_defaults(cls) -> 'RadialQuadrature':
        section = default('kernel')
        return cls(
            truncation=float(section['truncation']),
            nodes=int(section['nodes']),
            panels=int(section['panels']),
            angular_points=int(section['angular_points']),
        )

    def rule(self) -> Tuple[np.ndarray, np.ndarray]:
        """(nodes, weights) on [0, truncation]."""
        return _radial_rule(self.truncation, self.nodes, self.panels)

    def angular_rule(self) -> Tuple[np.ndarray, np.ndarray]:
        """Equispaced rule on [0, 2*pi), exponentially accurate for periodic integrands."""
        n = self.angular_points
        return 2.0 * np.pi * np.arange(n) / n, np.full(n, 2.0 * np.pi / n)


@lru_cache(maxsize=16)
def _radial_rule(truncation: float, nodes: int, panels: int) -> Tuple[np.ndarray, np.ndarray]:
    widths = RADIAL_GROWTH ** np.arange(panels)
    breakpoints = np.concatenate([[0.0], np.cumsum(widths)]) * (truncation / widths.sum())
    x, w = gauss_legendre_panels(breakpoints, nodes // panels)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


@dataclass(frozen=True)
class LogQuadrature:
    """
    Gauss-Legendre panels of fixed width in u = ln(s).

    s_min / s_max fix the integration range; when left as None the oracle
    chooses them from the active spectrum and the tolerances in defaults.yaml.
    """

    nodes_per_panel: int = 8
    panel_width: float = 1.0
    s_min: Optional[float] = None
    s_max: Optional[float] = None

    def __post_init__(self):
        if self.nodes_per_panel < 2:
            raise BadQuadrature(f"nodes_per_panel must be >= 2, got {self.nodes_per_panel}")
        if self.panel_width <= 0:
            raise BadQuadrature(f"panel_width must be positive, got {self.panel_width}")
        if self.s_min is not None and self.s_max is not None and not 0 < self.s_min < self.s_max:
            raise BadQuadrature(f"need 0 < s_min < s_max, got [{self.s_min}, {self.s_max}]")

    @classmethod
    def from_defaults(cls) -> 'LogQuadrature':
        section = default('quadrature')
        return cls(nodes_per_panel=int(section['nodes_per_panel']),
                   panel_width=float(section['panel_width']))

    def rule(self, s_min: float, s_max: float) -> Tuple[np.ndarray, np.ndarray]:
        """
        Nodes and s-measure weights on [s_min, s_max].

        Returns:
            (s, w) with sum(w * phi(s)) approximating the integral of phi over [s_min, s_max]
        """
        return log_graded_rule(np.log(s_min), np.log(s_max), self.nodes_per_panel, self.panel_width)


def log_graded_rule(u_min: float, u_max: float, nodes_per_panel: int,
                    panel_width: float) -> Tuple[np.ndarray, np.ndarray]:
    """
    Composite rule in u = ln(s) mapped back to s.

    Args:
        u_min, u_max: Range in the log variable
        nodes_per_panel: Gauss-Legendre order per panel
        panel_width: Target panel width in u (the last panel is shrunk to fit)

    Returns:
        (s, w): nodes in s and weights for the measure ds
    """
    if not u_max > u_min:
        raise BadQuadrature(f"empty log range [{u_min}, {u_max}]")
    panels = max(1, int(np.ceil((u_max - u_min) / panel_width)))
    breakpoints = np.linspace(u_min, u_max, panels + 1)
    u, w = gauss_legendre_panels(breakpoints, nodes_per_panel)
    s = np.exp(u)
    logger.debug("log rule: u in [%.2f, %.2f], %d panels x %d nodes", u_min, u_max, panels,
                 nodes_per_panel)
    return s, w * s
