"""Superposition of singular curves and the resulting isometric embeddings of u^2 (dv^2 - du^2)"""

import logging
import threading
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import ChartError, DomainError
from ..models.charts import N2Point
from ..models.curves import GeneratorPair, SingularCurve
from ..models.mesh import SurfaceEvaluator, SurfaceMesh
from ..numkit.functions import Smooth1D
from ..numkit.integrate import QuadConfig, integrate
from ..numkit.linalg import Signature
from .so12 import so12_from_pq, x_from_y

logger = logging.getLogger(__name__)


class _ArcIntegral:
    """
    v contribution -+ integral of sqrt(2 f''') from a reference point,
    memoised per parameter value.
    """

    def __init__(self, func: Smooth1D, ref: float, sign: float,
                 config: Optional[QuadConfig] = None):
        self.func = func
        self.ref = ref
        self.sign = sign
        self.config = config or QuadConfig()
        self._cache: Dict[float, float] = {}
        self._lock = threading.Lock()

    def integrand(self, t):
        return np.sqrt(2 * np.asarray(self.func.derivative(t, 3), dtype=float))

    def _single(self, t: float) -> float:
        with self._lock:
            if t in self._cache:
                return self._cache[t]
        value = self.sign * integrate(self.integrand, self.ref, t, self.config)
        with self._lock:
            self._cache[t] = value
        return value

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        unique, inverse = np.unique(t, return_inverse=True)
        values = np.array([self._single(float(x)) for x in unique])
        return values[inverse].reshape(t.shape)


def _reference(domain: Tuple[float, float]) -> float:
    lo, hi = domain
    return float(min(max(0.0, lo), hi))


def singular_curve_from_generator(side: str, func: Smooth1D, domain: Tuple[float, float],
                                  root_sign: int = 1,
                                  quad_config: Optional[QuadConfig] = None) -> SingularCurve:
    """
    Integral curve of a singular system determined by one generator.

    Args:
        side: '+' for F(p), '-' for G(q)
        func: Generator with positive third derivative
        domain: Parameter interval; v is measured from 0 clipped into it
        root_sign: Branch of the fourth root for p0 / q0

    Returns:
        SingularCurve with components (p, p0, v, y1, y2, y3) or the q analog
    """
    sign = -1.0 if side == '+' else 1.0
    arc = _ArcIntegral(func, _reference(domain), sign, quad_config)

    def components(t):
        t = np.asarray(t, dtype=float)
        f0, f1, f2, f3 = (np.asarray(func.derivative(t, k), dtype=float) for k in range(4))
        root = root_sign * (8 * f3) ** 0.25
        if side == '+':
            y1 = -(t ** 2 + 1) * f2 + 2 * t * f1 - 2 * f0
            y2 = -(t ** 2 - 1) * f2 + 2 * t * f1 - 2 * f0
            y3 = 2 * t * f2 - 2 * f1
        else:
            y1 = (t ** 2 + 1) * f2 - 2 * t * f1 + 2 * f0
            y2 = (t ** 2 - 1) * f2 - 2 * t * f1 + 2 * f0
            y3 = -2 * t * f2 + 2 * f1
        return np.stack([t, root, arc(t), y1, y2, y3], axis=0)

    return SingularCurve(side=side, components=components, domain=domain, label='generator')


def superpose(plus: np.ndarray, minus: np.ndarray) -> np.ndarray:
    """
    Combine component rows of a '+' and a '-' singular curve.

    Returns rows (p, p0, q, q0, v, y1, y2, y3); the group acting on the
    y-fibre is abelian, so v and y simply add.

    Raises:
        ChartError: If p == q or p0 q0 == 0 anywhere
    """
    plus = np.asarray(plus, dtype=float)
    minus = np.asarray(minus, dtype=float)
    if np.any(plus[0] == minus[0]):
        raise ChartError("p == q lies on the degenerate locus u = 0")
    if np.any(plus[1] * minus[1] == 0):
        raise ChartError("p0 and q0 must be nonzero")
    return np.stack([plus[0], plus[1], minus[0], minus[1],
                     plus[2] + minus[2],
                     plus[3] + minus[3], plus[4] + minus[4], plus[5] + minus[5]], axis=0)


def superpose_points(plus: SingularCurve, t_plus: float, minus: SingularCurve, t_minus: float) -> N2Point:
    return N2Point.from_array(superpose(plus(t_plus), minus(t_minus)))


def surface_from_superposed(rows: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(x, u, v) from superposed rows; x has shape (..., 3)"""
    p, p0, q, q0, v = rows[:5]
    y = np.moveaxis(rows[5:8], 0, -1)
    x = x_from_y(p, p0, q, q0, y)
    u = -0.5 * p0 * q0 * (p - q)
    return x, u, v


class GeneratorSurface:
    """Embedding determined by a validated generator pair"""

    def __init__(self, pair: GeneratorPair, quad_config: Optional[QuadConfig] = None):
        self.pair = pair.validate()
        self.plus = singular_curve_from_generator('+', pair.F, pair.p_domain, pair.p0_sign, quad_config)
        self.minus = singular_curve_from_generator('-', pair.G, pair.q_domain, pair.q0_sign, quad_config)

    def _check(self, p, q):
        (p_lo, p_hi), (q_lo, q_hi) = self.pair.p_domain, self.pair.q_domain
        if np.any(p < p_lo) or np.any(p > p_hi) or np.any(q < q_lo) or np.any(q > q_hi):
            raise DomainError("(p, q) outside the generator domains")
        if np.any(np.asarray(p) == np.asarray(q)):
            raise ChartError("p == q lies on the degenerate locus u = 0")

    def rows(self, p, q) -> np.ndarray:
        p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
        return superpose(self.plus(p), self.minus(q))

    def point(self, p, q) -> np.ndarray:
        p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
        p0, q0 = self.pair.p0(p), self.pair.q0(q)
        plus = self._plus_y(p)
        minus = self._minus_y(q)
        return x_from_y(p, p0, q, q0, np.moveaxis(plus + minus, 0, -1))

    def _plus_y(self, p):
        F = self.pair.F
        f0, f1, f2 = (np.asarray(F.derivative(p, k), dtype=float) for k in range(3))
        return np.stack([-(p ** 2 + 1) * f2 + 2 * p * f1 - 2 * f0,
                         -(p ** 2 - 1) * f2 + 2 * p * f1 - 2 * f0,
                         2 * p * f2 - 2 * f1], axis=0)

    def _minus_y(self, q):
        G = self.pair.G
        g0, g1, g2 = (np.asarray(G.derivative(q, k), dtype=float) for k in range(3))
        return np.stack([(q ** 2 + 1) * g2 - 2 * q * g1 + 2 * g0,
                         (q ** 2 - 1) * g2 - 2 * q * g1 + 2 * g0,
                         -2 * q * g2 + 2 * g1], axis=0)

    def u(self, p, q):
        return -0.5 * self.pair.p0(p) * self.pair.q0(q) * (np.asarray(p) - np.asarray(q))

    def chart(self, p, q) -> np.ndarray:
        p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
        v = self.plus(p)[2] + self.minus(q)[2]
        return np.stack([self.u(p, q), v], axis=-1)

    def chart_jacobian(self, p, q) -> np.ndarray:
        """[[u_p, u_q], [v_p, v_q]]; v partials are exact, u partials use central differences of p0, q0"""
        p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
        hp = 1e-5 * np.maximum(1.0, np.abs(p))
        hq = 1e-5 * np.maximum(1.0, np.abs(q))
        p0, q0 = self.pair.p0(p), self.pair.q0(q)
        dp0 = (self.pair.p0(p + hp) - self.pair.p0(p - hp)) / (2 * hp)
        dq0 = (self.pair.q0(q + hq) - self.pair.q0(q - hq)) / (2 * hq)
        u_p = -0.5 * (dp0 * q0 * (p - q) + p0 * q0)
        u_q = -0.5 * (p0 * dq0 * (p - q) - p0 * q0)
        v_p = -np.sqrt(2 * np.asarray(self.pair.F.derivative(p, 3), dtype=float))
        v_q = np.sqrt(2 * np.asarray(self.pair.G.derivative(q, 3), dtype=float))
        return np.stack([np.stack([u_p, u_q], axis=-1), np.stack([v_p, v_q], axis=-1)], axis=-2)

    def frame(self, p, q) -> np.ndarray:
        p, q = np.broadcast_arrays(np.asarray(p, dtype=float), np.asarray(q, dtype=float))
        return so12_from_pq(p, q, self.pair.p0(p), self.pair.q0(q))

    def evaluator(self) -> SurfaceEvaluator:
        return SurfaceEvaluator(point=self.point, chart=self.chart,
                                chart_jacobian=self.chart_jacobian, frame=self.frame)


def embed_from_generators(pair: GeneratorPair, p, q) -> Tuple[np.ndarray, np.ndarray]:
    """
    Surface point and metric coordinates for given (p, q).

    Args:
        pair: Generators with positive third derivatives
        p, q: Parameters (scalars or arrays of equal shape), p != q

    Returns:
        (x, uv) with x of shape (..., 3) and uv = (u, v) of shape (..., 2)

    Raises:
        GeneratorError: If a third derivative is not positive
        ChartError: On the locus p == q
    """
    surface = GeneratorSurface(pair)
    surface._check(np.asarray(p), np.asarray(q))
    return surface.point(p, q), surface.chart(p, q)


def constant_generator_pq(eps1: float, eps2: float, u, v) -> Tuple[np.ndarray, np.ndarray]:
    """Invert u = eps1 eps2 (q - p)/2, v = (eps2^2 q - eps1^2 p)/2"""
    if eps1 ** 2 == eps2 ** 2:
        raise ChartError(f"Constant generators need eps1^2 != eps2^2, got eps1={eps1}, eps2={eps2}")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    p = (2 * v - 2 * u * eps2 / eps1) / (eps2 ** 2 - eps1 ** 2)
    q = p + 2 * u / (eps1 * eps2)
    return p, q


def special_embedding(eps1: float, eps2: float, u, v) -> np.ndarray:
    """
    Closed-form embedding for constant generators, as a function of (u, v).

    Returns:
        Array (..., 3)
    """
    if eps1 ** 2 == eps2 ** 2:
        raise ChartError(f"Constant generators need eps1^2 != eps2^2, got eps1={eps1}, eps2={eps2}")
    u = np.asarray(u, dtype=float)
    v = np.asarray(v, dtype=float)
    s2 = eps1 ** 2 + eps2 ** 2
    d2 = eps1 ** 2 - eps2 ** 2
    m = eps1 * eps2
    cubic = (s2 * (v ** 3 + 3 * u ** 2 * v) - 2 * m * (u ** 3 + 3 * u * v ** 2)) / (3 * d2 ** 2)
    x1 = cubic + s2 * v / 4 - m * u / 2
    x2 = cubic - s2 * v / 4 + m * u / 2
    x3 = (s2 * (u ** 2 + v ** 2) - 4 * m * u * v) / (2 * d2)
    return np.stack([x1, x2, x3], axis=-1)


def null_coordinates(u, v):
    """(u, v) -> (v - u, v + u)"""
    return np.asarray(v) - np.asarray(u), np.asarray(v) + np.asarray(u)


def from_null_coordinates(ubar, vbar):
    return (np.asarray(vbar) - np.asarray(ubar)) / 2, (np.asarray(ubar) + np.asarray(vbar)) / 2


def printed_uv_from_generators(pair: GeneratorPair, p, q) -> np.ndarray:
    """u taken literally as -(p - q)(F''' G''')^(1/4), kept for errata detection"""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    f3 = np.asarray(pair.F.derivative(p, 3), dtype=float)
    g3 = np.asarray(pair.G.derivative(q, 3), dtype=float)
    return -(p - q) * (f3 * g3) ** 0.25


def printed_constant_generator_embedding(eps1: float, eps2: float, p, q) -> np.ndarray:
    """x(p, q) for constant generators written out termwise, kept for errata detection"""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    e1, e2 = eps1 ** 2, eps2 ** 2
    base = -e1 ** 2 * p ** 3 / 3 + e2 ** 2 * q ** 3 / 3 + e1 * e2 * p * q * (p - q)
    x1 = (base - (e1 - e2) * (p + q)) / 8
    x2 = (base + (e1 - e2) * (p + q)) / 8
    x3 = (e1 - e2) * (e1 * p ** 2 + e2 * q ** 2) / 8
    return np.stack([x1, x2, x3], axis=-1)


def _uniform(domain: Tuple[float, float], n: int) -> np.ndarray:
    return np.linspace(domain[0], domain[1], n)


def chart_jacobian_sign_changes(mesh: SurfaceMesh) -> int:
    """Number of grid edges across which det d(u, v)/d(a, b) changes sign"""
    if mesh.evaluator is None or mesh.evaluator.chart_jacobian is None:
        return 0
    A, B = mesh.grid()
    det = np.linalg.det(mesh.evaluator.chart_jacobian(A, B))
    sign = np.sign(det)
    flips = int(np.sum(sign[1:, :] * sign[:-1, :] < 0) + np.sum(sign[:, 1:] * sign[:, :-1] < 0))
    if flips:
        logger.warning(f"Chart Jacobian changes sign across {flips} grid edges; (u, v) is not a chart there")
    return flips


def generator_mesh(pair: GeneratorPair, grid: Tuple[int, int] = (50, 50),
                   p_range: Optional[Tuple[float, float]] = None,
                   q_range: Optional[Tuple[float, float]] = None) -> SurfaceMesh:
    """
    Sample the generator embedding over a (p, q) grid.

    Grid lines where p == q are nudged off the degenerate locus.
    """
    surface = GeneratorSurface(pair)
    ps = _uniform(p_range or pair.p_domain, grid[0])
    qs = _uniform(q_range or pair.q_domain, grid[1])
    clash = np.isin(ps, qs)
    if np.any(clash):
        ps = np.where(clash, ps + 1e-7 * np.maximum(1.0, np.abs(ps)), ps)

    mesh = SurfaceMesh.from_evaluator(
        ('p', 'q'), ps, qs, surface.evaluator(), Signature.LORENTZ,
        metadata={'kind': 'generators', 'generators': pair.to_dict()}
    )
    mesh.metadata['jacobian_sign_changes'] = chart_jacobian_sign_changes(mesh)
    logger.info(f"Built {grid[0]}x{grid[1]} generator mesh")
    return mesh


def special_mesh(eps1: float, eps2: float, u_range: Tuple[float, float],
                 v_range: Tuple[float, float], grid: Tuple[int, int] = (50, 50),
                 null_coords: bool = False) -> SurfaceMesh:
    """
    Mesh of the constant-generator surface over (u, v), or over the null
    coordinates (v - u, v + u) when null_coords is set.
    """
    def frame_uv(u, v):
        p, q = constant_generator_pq(eps1, eps2, u, v)
        return so12_from_pq(p, q, eps1 * np.ones_like(p), eps2 * np.ones_like(q))

    if null_coords:
        jac = np.array([[-0.5, 0.5], [0.5, 0.5]])
        evaluator = SurfaceEvaluator(
            point=lambda a, b: special_embedding(eps1, eps2, *from_null_coordinates(a, b)),
            chart=lambda a, b: np.stack(from_null_coordinates(a, b), axis=-1),
            chart_jacobian=lambda a, b: np.broadcast_to(jac, np.shape(a) + (2, 2)),
            frame=lambda a, b: frame_uv(*from_null_coordinates(a, b))
        )
        axes = ('ubar', 'vbar')
    else:
        evaluator = SurfaceEvaluator(
            point=lambda a, b: special_embedding(eps1, eps2, a, b),
            chart=lambda a, b: np.stack([np.asarray(a, dtype=float), np.asarray(b, dtype=float)], axis=-1),
            chart_jacobian=lambda a, b: np.broadcast_to(np.eye(2), np.shape(a) + (2, 2)),
            frame=frame_uv
        )
        axes = ('u', 'v')

    mesh = SurfaceMesh.from_evaluator(
        axes, _uniform(u_range, grid[0]), _uniform(v_range, grid[1]), evaluator, Signature.LORENTZ,
        metadata={'kind': 'special', 'eps': [eps1, eps2], 'null_coords': null_coords}
    )
    logger.info(f"Built {grid[0]}x{grid[1]} special mesh over {axes}")
    return mesh
