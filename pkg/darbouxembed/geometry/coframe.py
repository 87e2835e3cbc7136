"""Oriented orthonormal coframes, connection forms and Gauss curvature of orthogonal metrics"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np

from ..errors import DegenerateMetricError
from ..models.metric import CurvatureJet, OrthogonalMetric2D
from ..numkit.differentiate import num_gradient, num_hessian

logger = logging.getLogger(__name__)


@dataclass
class Coframe:
    """
    eta^1 = A dx, eta^2 = B dy with (x, y) an ordering of (u, v).

    For sign_u = -1 the roles swap (x = v, y = u) so that eta^1 is always
    the spacelike direction in the Lorentzian convention (+, -).
    """
    A: np.ndarray
    B: np.ndarray
    A_x: np.ndarray
    A_y: np.ndarray
    B_x: np.ndarray
    B_y: np.ndarray
    A_yy: np.ndarray
    A_xy: np.ndarray
    B_xx: np.ndarray
    B_xy: np.ndarray
    sigma: int
    swapped: bool

    @property
    def connection(self) -> Tuple[np.ndarray, np.ndarray]:
        """(a, b) with eta^1_2 = a dx + b dy"""
        return self.A_y / self.B, -self.sigma * self.B_x / self.A

    @property
    def gauss_curvature(self) -> np.ndarray:
        # K = -[(B_x/A)_x + sigma (A_y/B)_y] / (A B)
        bx_over_a_x = self.B_xx / self.A - self.B_x * self.A_x / self.A ** 2
        ay_over_b_y = self.A_yy / self.B - self.A_y * self.B_y / self.B ** 2
        return -(bx_over_a_x + self.sigma * ay_over_b_y) / (self.A * self.B)


def coframe(metric: OrthogonalMetric2D, u, v, tol: float = 1e-14) -> Coframe:
    """
    Coframe data at (u, v), vectorised over arrays.

    Raises:
        DegenerateMetricError: If a coefficient vanishes
    """
    swapped = metric.sign_u < 0
    first, second = (metric.G, metric.E) if swapped else (metric.E, metric.G)

    def d(f, dx: int, dy: int):
        # partial in (x, y) expressed through (u, v)
        return f.partial(u, v, dy, dx) if swapped else f.partial(u, v, dx, dy)

    A = d(first, 0, 0)
    B = d(second, 0, 0)
    if np.any(np.abs(A) <= tol) or np.any(np.abs(B) <= tol):
        raise DegenerateMetricError(f"Metric {metric.name} degenerates at the requested point")

    return Coframe(
        A=A, B=B,
        A_x=d(first, 1, 0), A_y=d(first, 0, 1),
        B_x=d(second, 1, 0), B_y=d(second, 0, 1),
        A_yy=d(first, 0, 2), A_xy=d(first, 1, 1),
        B_xx=d(second, 2, 0), B_xy=d(second, 1, 1),
        sigma=metric.sigma,
        swapped=swapped
    )


def gauss_curvature(metric: OrthogonalMetric2D, u, v):
    """Gauss curvature from closed-form coefficient partials"""
    return coframe(metric, u, v).gauss_curvature


def to_xy(metric: OrthogonalMetric2D, u, v):
    return (v, u) if metric.sign_u < 0 else (u, v)


def from_xy(metric: OrthogonalMetric2D, x, y):
    return (y, x) if metric.sign_u < 0 else (x, y)


def frame_jet(metric: OrthogonalMetric2D, func: Callable, u: float, v: float,
              h: Optional[float] = None) -> CurvatureJet:
    """
    First and second frame derivatives of a scalar function of (u, v).

    Coordinate partials come from fourth-order stencils in (x, y); the
    connection terms turn them into f_i and f_ij with
    d f_i = f_j eta^j_i + f_ij eta^j.
    """
    x0, y0 = to_xy(metric, u, v)

    def f_xy(p):
        uu, vv = from_xy(metric, p[0], p[1])
        return func(uu, vv)

    point = np.array([x0, y0], dtype=float)
    step = None if h is None else h * np.maximum(1.0, np.abs(point))
    grad = num_gradient(f_xy, point, step)[0]
    hess = num_hessian(f_xy, point, step)[0]
    value = float(func(u, v))

    cf = coframe(metric, u, v)
    A, B = float(cf.A), float(cf.B)
    a, b = (float(c) for c in cf.connection)
    sigma = cf.sigma
    f_x, f_y = grad
    f_xx, f_xy_, f_yy = hess[0, 0], hess[0, 1], hess[1, 1]

    f1 = f_x / A
    f2 = f_y / B
    f1_x = f_xx / A - f_x * float(cf.A_x) / A ** 2
    f1_y = f_xy_ / A - f_x * float(cf.A_y) / A ** 2
    f2_x = f_xy_ / B - f_y * float(cf.B_x) / B ** 2
    f2_y = f_yy / B - f_y * float(cf.B_y) / B ** 2

    second = np.array([
        [(f1_x + sigma * f2 * a) / A, (f1_y + sigma * f2 * b) / B],
        [(f2_x - f1 * a) / A, (f2_y - f1 * b) / B]
    ])
    return CurvatureJet(value=value, first=np.array([f1, f2]), second=second, at=(u, v))
