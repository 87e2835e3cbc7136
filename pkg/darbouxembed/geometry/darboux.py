"""Numerical test of the Darboux-integrability conditions for orthogonal 2-metrics"""

import logging
from dataclasses import dataclass
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import FlatPointError, MixedTypeError
from ..models.metric import CurvatureJet, OrthogonalMetric2D
from ..models.report import DarbouxReport
from ..processor.parallel import map_grid
from .coframe import frame_jet, gauss_curvature

logger = logging.getLogger(__name__)

Q_CHANNELS = ('q11', 'q22', 'q12', 'q21')
K_CHANNELS = ('k11', 'k12', 'k21', 'k22')


@dataclass
class JetConfig:
    """Differencing settings for curvature jets"""
    step: float = 1e-3  # relative stencil step, scaled by max(1, |x|)
    flat_tol: float = 1e-12

    def __post_init__(self):
        if self.step <= 0:
            raise ValueError("Jet step must be positive")
        if self.flat_tol <= 0:
            raise ValueError("Flat-point threshold must be positive")


def _curvature(metric: OrthogonalMetric2D, u: float, v: float, config: JetConfig) -> float:
    K = float(gauss_curvature(metric, u, v))
    if abs(K) <= config.flat_tol:
        raise FlatPointError(f"|K| = {abs(K):.3g} at (u, v) = ({u:.6g}, {v:.6g}); conditions undefined")
    return K


def curvature_jet(metric: OrthogonalMetric2D, u: float, v: float,
                  config: Optional[JetConfig] = None) -> CurvatureJet:
    """
    Frame jet of q = |K|^(-3/4) at (u, v).

    Raises:
        FlatPointError: If |K| <= flat_tol
    """
    config = config or JetConfig()
    K = _curvature(metric, u, v, config)
    jet = frame_jet(metric, lambda a, b: np.abs(gauss_curvature(metric, a, b)) ** -0.75,
                    u, v, config.step)
    jet.K = K
    return jet


def rotate_jet(jet: CurvatureJet, angle: float) -> CurvatureJet:
    """Jet in the orthonormal coframe rotated by a constant angle"""
    return jet.rotated(angle)


def condition_residuals(jet: CurvatureJet, sigma: int) -> Dict[str, float]:
    """
    Residuals of the q-form conditions.

    Riemannian: q11 = q22 = 3 eps q^(-1/3), q12 = q21 = 0.
    Lorentzian: q11 = -q22 = 3 eps q^(-1/3), q12 = q21 = 0.
    """
    eps = 1.0 if jet.K > 0 else -1.0
    target = 3 * eps * jet.value ** (-1.0 / 3.0)
    h = jet.second
    return {
        'q11': float(h[0, 0] - target),
        'q22': float(h[1, 1] - sigma * target),
        'q12': float(h[0, 1]),
        'q21': float(h[1, 0])
    }


def k_condition_residuals(metric: OrthogonalMetric2D, u: float, v: float,
                          config: Optional[JetConfig] = None) -> Dict[str, float]:
    """
    Residuals of the equivalent conditions written for k = |K|^(1/2):

        k11 - 5/2 k1^2 / k + 2 eps k^3
        k12 - 5/2 k1 k2 / k
        k21 - 5/2 k1 k2 / k
        k22 - 5/2 k2^2 / k + 2 sigma eps k^3
    """
    config = config or JetConfig()
    K = _curvature(metric, u, v, config)
    eps = 1.0 if K > 0 else -1.0
    sigma = metric.sigma
    jet = frame_jet(metric, lambda a, b: np.sqrt(np.abs(gauss_curvature(metric, a, b))),
                    u, v, config.step)
    k = jet.value
    k1, k2 = jet.first
    h = jet.second
    return {
        'k11': float(h[0, 0] - 2.5 * k1 ** 2 / k + 2 * eps * k ** 3),
        'k12': float(h[0, 1] - 2.5 * k1 * k2 / k),
        'k21': float(h[1, 0] - 2.5 * k1 * k2 / k),
        'k22': float(h[1, 1] - 2.5 * k2 ** 2 / k + 2 * sigma * eps * k ** 3)
    }


def classify(metric: OrthogonalMetric2D, us: np.ndarray, vs: np.ndarray,
             config: Optional[JetConfig] = None) -> int:
    """
    Sign of K over the grid: +1 elliptic, -1 hyperbolic.

    Raises:
        FlatPointError: If |K| is below threshold anywhere
        MixedTypeError: If K changes sign
    """
    config = config or JetConfig()
    U, V = np.meshgrid(us, vs, indexing='ij')
    K = np.asarray(gauss_curvature(metric, U, V), dtype=float)
    if np.any(np.abs(K) <= config.flat_tol):
        i, j = np.unravel_index(np.argmin(np.abs(K)), K.shape)
        raise FlatPointError(
            f"Metric {metric.name} is flat at (u, v) = ({U[i, j]:.6g}, {V[i, j]:.6g})"
        )
    if np.any(K > 0) and np.any(K < 0):
        raise MixedTypeError(f"Gauss curvature of {metric.name} changes sign on the grid")
    return 1 if K.flat[0] > 0 else -1


def check_integrability(metric: OrthogonalMetric2D, grid: Tuple[int, int] = (20, 20),
                        tol: float = 1e-4, config: Optional[JetConfig] = None,
                        form: str = 'q') -> DarbouxReport:
    """
    Evaluate the integrability conditions on an interior grid.

    Args:
        metric: Metric to test
        grid: Sample counts in u and v
        tol: Pass threshold on the max absolute residual
        config: Jet differencing settings
        form: 'q' for the q-form conditions, 'k' for the k-form cross-check

    Returns:
        DarbouxReport with per-channel residual grids and the verdict
    """
    config = config or JetConfig()
    if form not in ('q', 'k'):
        raise ValueError(f"Unknown condition form {form!r}")

    us, vs = metric.grid(*grid)
    epsilon = classify(metric, us, vs, config)
    sigma = metric.sigma

    def residuals_at(point):
        u, v = point
        if form == 'k':
            return k_condition_residuals(metric, u, v, config)
        return condition_residuals(curvature_jet(metric, u, v, config), sigma)

    points = [(u, v) for u in us for v in vs]
    results = map_grid(residuals_at, points)

    channels = K_CHANNELS if form == 'k' else Q_CHANNELS
    residuals = {
        name: np.array([r[name] for r in results]).reshape(len(us), len(vs))
        for name in channels
    }

    report = DarbouxReport(
        metric_name=metric.name,
        epsilon=epsilon,
        sigma=sigma,
        grid_u=us,
        grid_v=vs,
        residuals=residuals,
        tolerance=tol,
        form=form
    )
    logger.info(
        f"Checked {metric.name} on {grid[0]}x{grid[1]} grid: "
        f"max residual {report.max_residual:.3e}, verdict {report.verdict}"
    )
    return report
