"""SO(1,2) charts, first integrals and Pfaffian forms for the model metric u^2 (dv^2 - du^2)"""

import logging
from typing import Tuple

import numpy as np

from ..errors import ChartError
from ..models.charts import ACoords, N2Point, PQPoint
from ..models.metric import OrthogonalMetric2D, Smooth2D
from ..numkit.functions import poly

logger = logging.getLogger(__name__)

# Column order of the Pfaffian coefficient matrices
N1_COLUMNS = ('dp', 'dp0', 'dq', 'dq0', 'dv', 'dx1', 'dx2', 'dx3')
N2_COLUMNS = ('dp', 'dp0', 'dq', 'dq0', 'dv', 'dy1', 'dy2', 'dy3')
FORM_ROWS = ('x1', 'x2', 'x3', 'v')

# Signs <e_i, e_i> of the frame columns in R^{1,2}
FRAME_SIGNS = np.array([1.0, -1.0, -1.0])


def g0_metric(domain=((-np.inf, np.inf), (-np.inf, np.inf))) -> OrthogonalMetric2D:
    """u^2 (dv^2 - du^2) with u allowed to carry either sign"""
    u = Smooth2D(poly(0.0, 1.0))
    return OrthogonalMetric2D(E=u, G=u, sign_u=-1, sign_v=1, domain=domain, name='g0')


def so12_from_a_arrays(a1, a2, a3) -> np.ndarray:
    """Group element for arrays of (a1, a2, a3), shape (..., 3, 3)"""
    a1, a2, a3 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (a1, a2, a3)))
    m2 = (a2 * a3 + 1) ** 2
    rows = [
        [(m2 + a2 ** 2 + a1 ** 2 * (a3 ** 2 + 1)) / (2 * a1),
         (m2 + a2 ** 2 - a1 ** 2 * (a3 ** 2 + 1)) / (2 * a1),
         -a2 * (a3 ** 2 + 1) - a3],
        [(m2 - a2 ** 2 + a1 ** 2 * (a3 ** 2 - 1)) / (2 * a1),
         (m2 - a2 ** 2 - a1 ** 2 * (a3 ** 2 - 1)) / (2 * a1),
         -a2 * (a3 ** 2 - 1) - a3],
        [(-a3 * (a2 ** 2 + a1 ** 2) - a2) / a1,
         (-a3 * (a2 ** 2 - a1 ** 2) - a2) / a1,
         2 * a2 * a3 + 1],
    ]
    return np.stack([np.stack(row, axis=-1) for row in rows], axis=-2)


def so12_from_a(a: ACoords) -> np.ndarray:
    """
    Element of SO_0(1,2) in the (a1, a2, a3) chart.

    Args:
        a: Chart coordinates, a1 > 0

    Returns:
        3x3 matrix g with g^T diag(1,-1,-1) g = diag(1,-1,-1), det g = 1
    """
    return so12_from_a_arrays(a.a1, a.a2, a.a3)


def first_integrals(u: float, a: ACoords) -> Tuple[float, float, float, float]:
    """
    Return (p, p0, q, q0) at a point of the frame bundle.

    Raises:
        ChartError: If u <= 0 or a1 - a2, a1 + a2 vanish
    """
    if u <= 0:
        raise ChartError(f"First integrals need u > 0, got {u}")
    diff, total = a.a1 - a.a2, a.a1 + a.a2
    if diff == 0 or total == 0:
        raise ChartError(f"a1 +- a2 vanishes at {a}")
    root = np.sqrt(u / a.a1)
    p = a.a3 - 1.0 / diff
    q = a.a3 + 1.0 / total
    return float(p), float(root * diff), float(q), float(root * total)


def so12_from_pq(p, q, p0, q0) -> np.ndarray:
    """
    Frame (e1 | e2 | e3) expressed through the first integrals, shape (..., 3, 3).

    Raises:
        ChartError: If p == q or p0 * q0 == 0 anywhere
    """
    p, q, p0, q0 = np.broadcast_arrays(*(np.asarray(x, dtype=float) for x in (p, q, p0, q0)))
    if np.any(p == q) or np.any(p0 * q0 == 0):
        raise ChartError("so12_from_pq needs p != q and p0 q0 != 0")
    P, Q = p0 ** 2, q0 ** 2
    d = p - q
    D = 2 * p0 * q0 * d
    e1 = [-(P * (p ** 2 + 1) + Q * (q ** 2 + 1)) / D,
          -(P * (p ** 2 - 1) + Q * (q ** 2 - 1)) / D,
          (P * p + Q * q) / (p0 * q0 * d)]
    e2 = [(p * q + 1) / d, (p * q - 1) / d, -(p + q) / d]
    e3 = [-(P * (p ** 2 + 1) - Q * (q ** 2 + 1)) / D,
          -(P * (p ** 2 - 1) - Q * (q ** 2 - 1)) / D,
          (P * p - Q * q) / (p0 * q0 * d)]
    columns = [np.stack(col, axis=-1) for col in (e1, e2, e3)]
    return np.stack(columns, axis=-1)


def phi(u: float, v: float, a: ACoords, x) -> PQPoint:
    """Map (u, v, a, x) on the integral manifold to (p, p0, q, q0, v, x)"""
    p, p0, q, q0 = first_integrals(u, a)
    x1, x2, x3 = (float(c) for c in x)
    return PQPoint(p, p0, q, q0, float(v), x1, x2, x3)


def phi_inverse(point: PQPoint) -> Tuple[float, float, ACoords, np.ndarray]:
    """
    Recover (u, v, a, x).

    Raises:
        ChartError: Outside u > 0, p0 + q0 > 0
    """
    u = point.u
    s = point.p0 + point.q0
    if u <= 0 or s <= 0:
        raise ChartError(f"phi_inverse needs u > 0 and p0 + q0 > 0, got u={u:.6g}, p0+q0={s:.6g}")
    a1 = s ** 2 / (4 * u)
    a2 = (point.q0 ** 2 - point.p0 ** 2) / (4 * u)
    a3 = point.p + 2 * u / (point.p0 * s)
    return u, point.v, ACoords(a1, a2, a3), point.x


def _shift(p, p0, q, q0) -> np.ndarray:
    """Difference x - y as a (..., 3) array"""
    P = p0 ** 2 * q0 ** 2 / 8
    return np.stack([P * (p - q) * (p * q + 1),
                     P * (p - q) * (p * q - 1),
                     P * (q ** 2 - p ** 2)], axis=-1)


def x_from_y(p, p0, q, q0, y) -> np.ndarray:
    return np.asarray(y) + _shift(*(np.asarray(c, dtype=float) for c in (p, p0, q, q0)))


def y_from_x(p, p0, q, q0, x) -> np.ndarray:
    return np.asarray(x) - _shift(*(np.asarray(c, dtype=float) for c in (p, p0, q, q0)))


def psi(point: PQPoint) -> N2Point:
    """Change of fibre coordinates x -> y that makes the superposition additive"""
    y = y_from_x(point.p, point.p0, point.q, point.q0, point.x)
    return N2Point(point.p, point.p0, point.q, point.q0, point.v, *(float(c) for c in y))


def psi_inverse(point: N2Point) -> PQPoint:
    x = x_from_y(point.p, point.p0, point.q, point.q0, point.y)
    return PQPoint(point.p, point.p0, point.q, point.q0, point.v, *(float(c) for c in x))


def n1_pfaffian_forms(p, p0, q, q0) -> np.ndarray:
    """
    Coefficients of the four Pfaffian forms cutting out integral surfaces
    in (p, p0, q, q0, v, x) coordinates.

    Rows follow FORM_ROWS, columns follow N1_COLUMNS; shape (..., 4, 8).
    """
    p, p0, q, q0 = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (p, p0, q, q0)))
    P, Q = p0 ** 2, q0 ** 2
    zero = np.zeros_like(p)
    one = np.ones_like(p)
    d = p - q

    x1 = [P * (P * (p ** 2 + 1) + Q * (q ** 2 - 2 * p * q - 1)) / 8,
          -p0 * Q * d * (p * q + 1) / 4,
          -Q * (P * (p ** 2 - 2 * p * q - 1) + Q * (q ** 2 + 1)) / 8,
          -P * q0 * d * (p * q + 1) / 4,
          zero, one, zero, zero]
    x2 = [P * (P * (p ** 2 - 1) + Q * (q ** 2 - 2 * p * q + 1)) / 8,
          -p0 * Q * d * (p * q - 1) / 4,
          -Q * (P * (p ** 2 - 2 * p * q + 1) + Q * (q ** 2 - 1)) / 8,
          -P * q0 * d * (p * q - 1) / 4,
          zero, zero, one, zero]
    x3 = [-p * P * (P - Q) / 4,
          p0 * Q * (p ** 2 - q ** 2) / 4,
          -q * Q * (P - Q) / 4,
          P * q0 * (p ** 2 - q ** 2) / 4,
          zero, zero, zero, one]
    v = [P / 2, zero, -Q / 2, zero, one, zero, zero, zero]

    rows = [np.stack(row, axis=-1) for row in (x1, x2, x3, v)]
    return np.stack(rows, axis=-2)


def n2_pfaffian_forms(p, p0, q, q0) -> np.ndarray:
    """Forms of the superposed system in (p, p0, q, q0, v, y); shape (..., 4, 8)"""
    p, p0, q, q0 = np.broadcast_arrays(*(np.asarray(c, dtype=float) for c in (p, p0, q, q0)))
    P4, Q4 = p0 ** 4, q0 ** 4
    zero = np.zeros_like(p)
    one = np.ones_like(p)

    y1 = [(p ** 2 + 1) * P4 / 8, zero, -(q ** 2 + 1) * Q4 / 8, zero, zero, one, zero, zero]
    y2 = [(p ** 2 - 1) * P4 / 8, zero, -(q ** 2 - 1) * Q4 / 8, zero, zero, zero, one, zero]
    y3 = [-p * P4 / 4, zero, q * Q4 / 4, zero, zero, zero, zero, one]
    v = [p0 ** 2 / 2, zero, -q0 ** 2 / 2, zero, one, zero, zero, zero]

    rows = [np.stack(row, axis=-1) for row in (y1, y2, y3, v)]
    return np.stack(rows, axis=-2)


def plus_integrands(p, p0, dp) -> np.ndarray:
    """Derivatives (dy1, dy2, dy3, dv) along a curve of the plus singular system"""
    P4 = p0 ** 4
    return np.stack([-(p ** 2 + 1) * P4 * dp / 8,
                     -(p ** 2 - 1) * P4 * dp / 8,
                     p * P4 * dp / 4,
                     -p0 ** 2 * dp / 2], axis=0)


def minus_integrands(q, q0, dq) -> np.ndarray:
    """Derivatives (dy1, dy2, dy3, dv) along a curve of the minus singular system"""
    Q4 = q0 ** 4
    return np.stack([(q ** 2 + 1) * Q4 * dq / 8,
                     (q ** 2 - 1) * Q4 * dq / 8,
                     -q * Q4 * dq / 4,
                     q0 ** 2 * dq / 2], axis=0)
