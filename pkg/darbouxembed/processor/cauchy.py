"""Geometric Cauchy problem for u^2 (dv^2 - du^2): lift, split, superpose"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Dict, Optional, Tuple

import numpy as np

from ..errors import DomainError, IntegrationError, LiftBreakdownError
from ..geometry.so12 import (
    g0_metric,
    minus_integrands,
    n1_pfaffian_forms,
    plus_integrands,
    so12_from_pq,
    x_from_y,
    y_from_x,
)
from ..geometry.verify import verify_embedding
from ..models.curves import InitialCurve, LiftState, SingularCurve
from ..models.mesh import SurfaceEvaluator, SurfaceMesh
from ..numkit.integrate import OdeConfig, TwoSidedTrajectory, ode_solve_both_ways
from ..numkit.linalg import Signature

logger = logging.getLogger(__name__)


class LiftMethod(Enum):
    """How the lift ODE is obtained"""
    DIRECT = "direct"  # solve the Pfaffian system for (r', s') pointwise
    PRINTED = "printed"  # closed-form right-hand side with the (x1' - x2')^2 factor
    VERBATIM = "verbatim"  # closed form with the (x1' + x2')^2 factor


@dataclass
class CurveAdmissibility:
    """Dense-sample check of x1' - x2' != 0 and x3' != 0"""
    min_dx12: float
    min_dx3: float
    samples: int
    tol: float = 1e-10

    @property
    def passed(self) -> bool:
        return self.min_dx12 > self.tol and self.min_dx3 > self.tol

    def to_dict(self) -> Dict:
        return {
            'min_dx12': self.min_dx12,
            'min_dx3': self.min_dx3,
            'samples': self.samples,
            'passed': self.passed
        }


def validate(curve: InitialCurve, samples: int = 2001, tol: float = 1e-10) -> CurveAdmissibility:
    """Report min |x1' - x2'| and min |x3'| over the curve's domain"""
    ts = np.linspace(curve.domain[0], curve.domain[1], samples)
    vel = curve.velocity(ts)
    return CurveAdmissibility(
        min_dx12=float(np.min(np.abs(vel[0] - vel[1]))),
        min_dx3=float(np.min(np.abs(vel[2]))),
        samples=samples,
        tol=tol
    )


def check_quadrature_parametrization(curve: InitialCurve, samples: int = 2001):
    """
    Residual of the relation curves must satisfy for the lift to be
    parametrised by r(t) = t:

        -4 (x1'^2 - x2'^2 - x3'^2) t^6 + 2 d^4 - d^3 (x1'' - x2'') t,  d = x1' - x2'

    Returns:
        (residual function of t, max |residual| over the domain)
    """
    def residual(t):
        t = np.asarray(t, dtype=float)
        v = curve.velocity(t)
        a = curve.acceleration(t)
        d = v[0] - v[1]
        return -4 * (v[0] ** 2 - v[1] ** 2 - v[2] ** 2) * t ** 6 + 2 * d ** 4 - d ** 3 * (a[0] - a[1]) * t

    ts = np.linspace(curve.domain[0], curve.domain[1], samples)
    return residual, float(np.max(np.abs(residual(ts))))


def _c_and_derivative(curve: InitialCurve, t):
    v = curve.velocity(t)
    a = curve.acceleration(t)
    denom = v[1] - v[0]
    c = v[2] / denom
    dc = (a[2] * denom - v[2] * (a[1] - a[0])) / denom ** 2
    return c, dc


def lift_rhs(curve: InitialCurve, method: LiftMethod):
    """Right-hand side for the lift state (r, s, v)"""
    def rhs(t, state):
        r, s, _ = state
        vel = curve.velocity(t)
        d = vel[0] - vel[1]

        if method is LiftMethod.DIRECT:
            c, dc = _c_and_derivative(curve, t)
            p, q = c + s, c - s
            forms = n1_pfaffian_forms(p, r, q, r)[:3]
            # columns dp, dp0, dq, dq0 with dp = c' + s', dq = c' - s', dp0 = dq0 = r'
            A = np.stack([forms[:, 1] + forms[:, 3], forms[:, 0] - forms[:, 2]], axis=1)
            b = -(forms[:, 5:8] @ vel) - (forms[:, 0] + forms[:, 2]) * dc
            (dr, ds), *_ = np.linalg.lstsq(A, b, rcond=None)
        else:
            dr = d / (2 * r ** 3 * s)
            if method is LiftMethod.PRINTED:
                factor = d ** 2
            else:
                factor = (vel[0] + vel[1]) ** 2
            ds = ((vel[1] ** 2 + vel[2] ** 2 - vel[0] ** 2) / s ** 2 - factor) / (2 * d * r ** 4)

        return np.array([dr, ds, -r ** 2 * ds])

    return rhs


def _terminal(index: int):
    def event(t, y):
        return y[index]
    event.terminal = True
    return event


@dataclass
class Lift:
    """Lift of an initial curve to the integral manifold, p0 = q0 = r"""
    curve: InitialCurve
    method: LiftMethod
    t0: float
    initial: Tuple[float, float, float]
    path: TwoSidedTrajectory = field(repr=False)

    def state(self, t) -> np.ndarray:
        """(r, s, v) rows"""
        return self.path(t)

    def lift_state(self, t: float) -> LiftState:
        r, s, v = self.state(t)
        c, _ = _c_and_derivative(self.curve, t)
        return LiftState(t=float(t), r=float(r), s=float(s), v=float(v), c=float(c))

    def pq(self, t) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(p, q, r) along the lift"""
        r, s, _ = self.state(t)
        c, _ = _c_and_derivative(self.curve, np.asarray(t, dtype=float))
        return c + s, c - s, r

    def velocity(self, t) -> np.ndarray:
        """(r', s', v') from the right-hand side along the trajectory"""
        rhs = lift_rhs(self.curve, self.method)
        t = np.atleast_1d(np.asarray(t, dtype=float))
        states = self.state(t)
        return np.stack([rhs(ti, states[:, i]) for i, ti in enumerate(t)], axis=1)

    def dpq(self, t) -> Tuple[np.ndarray, np.ndarray]:
        """(p', q') along the lift"""
        t = np.asarray(t, dtype=float)
        _, dc = _c_and_derivative(self.curve, t)
        ds = self.velocity(t.ravel())[1].reshape(t.shape)
        return dc + ds, dc - ds


def lift(curve: InitialCurve, r0: float = 1.0, method=LiftMethod.DIRECT,
         t0: Optional[float] = None, s0: Optional[float] = None, v0: Optional[float] = None,
         t_range: Optional[Tuple[float, float]] = None,
         config: Optional[OdeConfig] = None) -> Lift:
    """
    Integrate the lift (r, s, v) on both sides of t0.

    Args:
        curve: Admissible initial curve
        r0: r(t0) > 0
        method: LiftMethod or its value
        t0: Start parameter, defaults to the curve's t0
        s0: s(t0); defaults to (x1' - x2')(t0) / (2 r0^3), which makes r'(t0) = 1
        v0: v(t0), defaults to the curve's v0
        t_range: Interval to cover, defaults to the curve's domain

    Raises:
        LiftBreakdownError: If r or s reaches 0
        DomainError: If t0 is outside the range or r0 <= 0
    """
    method = LiftMethod(method) if not isinstance(method, LiftMethod) else method
    t0 = curve.start if t0 is None else float(t0)
    a, b = t_range or curve.domain
    if not a <= t0 <= b:
        raise DomainError(f"t0={t0} outside [{a}, {b}]")
    if r0 <= 0:
        raise DomainError(f"r0 must be positive, got {r0}")
    if s0 is None:
        vel = curve.velocity(t0)
        s0 = float((vel[0] - vel[1]) / (2 * r0 ** 3))
    if s0 == 0:
        raise LiftBreakdownError("s(t0) = 0", t=t0)
    v0 = curve.v0 if v0 is None else float(v0)

    rhs = lift_rhs(curve, method)
    y0 = [r0, s0, v0]
    events = [_terminal(0), _terminal(1)]
    try:
        path = ode_solve_both_ways(rhs, t0, y0, a, b, config, events=events)
    except IntegrationError as e:
        logger.error(f"Lift integration failed near t={e.t_last}: {e}")
        raise
    for traj in (path.forward, path.backward):
        if traj.terminated:
            hits = [te[0] for te in traj.t_events if len(te)]
            where = hits[0] if hits else float(traj.t[-1])
            raise LiftBreakdownError(f"Lift reached r = 0 or s = 0 at t={where:.6g}", t=where)

    logger.info(f"Lift ({method.value}) integrated on [{a}, {b}] from t0={t0}")
    return Lift(curve=curve, method=method, t0=t0, initial=(r0, s0, v0),
                path=path)


def lift_residuals(lifted: Lift, samples: int = 101) -> Dict[str, float]:
    """
    Max |form(velocity)| of the four Pfaffian forms along the lift, plus the
    identity v' = -r^2 s'.
    """
    a, b = lifted.path.t_min, lifted.path.t_max
    ts = np.linspace(a, b, samples)
    curve = lifted.curve
    r, s, _ = lifted.state(ts)
    c, dc = _c_and_derivative(curve, ts)
    dr, ds, dv = lifted.velocity(ts)
    p, q = c + s, c - s
    vel = curve.velocity(ts)

    tangent = np.stack([dc + ds, dr, dc - ds, dr, dv, vel[0], vel[1], vel[2]], axis=-1)
    forms = n1_pfaffian_forms(p, r, q, r)
    values = np.einsum('nkj,nj->nk', forms, tangent)
    out = {f'form_{name}': float(np.max(np.abs(values[:, k]))) for k, name in enumerate(('x1', 'x2', 'x3', 'v'))}
    out['v_identity'] = float(np.max(np.abs(dv + r ** 2 * ds)))
    return out


@dataclass
class Split:
    """The two singular curves whose superposition reproduces the lift"""
    plus: SingularCurve
    minus: SingularCurve
    conservation: float


def _n2_curve(lifted: Lift, t) -> np.ndarray:
    """Rows (p, r, q, r, v, y1, y2, y3) of the lift in superposition coordinates"""
    p, q, r = lifted.pq(t)
    v = lifted.state(t)[2]
    x = np.moveaxis(lifted.curve.position(t), 0, -1)
    y = np.moveaxis(y_from_x(p, r, q, r, x), -1, 0)
    return np.concatenate([np.stack([p, r, q, r, v]), y], axis=0)


def split(lifted: Lift, config: Optional[OdeConfig] = None, samples: int = 101) -> Split:
    """
    Integrate both singular curves from half of the lifted data at t0.

    Returns:
        Split with components (p, p0, v+, y+) and (q, q0, v-, y-)
    """
    config = config or OdeConfig()
    t0 = lifted.t0
    a, b = lifted.path.t_min, lifted.path.t_max
    sigma0 = _n2_curve(lifted, np.array(t0))
    half = 0.5 * np.array([sigma0[5], sigma0[6], sigma0[7], sigma0[4]])

    def side_rhs(sign: int):
        def rhs(t, _):
            p, q, r = lifted.pq(t)
            dp, dq = lifted.dpq(np.array([t]))
            if sign > 0:
                return plus_integrands(p, r, dp[0])
            return minus_integrands(q, r, dq[0])
        return rhs

    curves = []
    for sign in (1, -1):
        rhs = side_rhs(sign)
        try:
            path = ode_solve_both_ways(rhs, t0, half, a, b, config)
        except IntegrationError as e:
            logger.error(f"Quadrature of the {'plus' if sign > 0 else 'minus'} curve failed: {e}")
            raise

        def components(t, path=path, sign=sign):
            t = np.asarray(t, dtype=float)
            p, q, r = lifted.pq(t)
            y1, y2, y3, v = path(t)
            return np.stack([p if sign > 0 else q, r, v, y1, y2, y3], axis=0)

        curves.append(SingularCurve(side='+' if sign > 0 else '-', components=components,
                                    domain=(a, b), label='split'))

    plus, minus = curves
    ts = np.linspace(a, b, samples)
    sigma = _n2_curve(lifted, ts)
    sp, sm = plus(ts), minus(ts)
    rebuilt = np.stack([sp[0], sp[1], sm[0], sm[1], sp[2] + sm[2],
                        sp[3] + sm[3], sp[4] + sm[4], sp[5] + sm[5]])
    conservation = float(np.max(np.abs(rebuilt - sigma)))
    logger.info(f"Split lift into singular curves, reconstruction error {conservation:.3e}")
    return Split(plus=plus, minus=minus, conservation=conservation)


def four_function_relation(p, p0, q, q0, lam):
    """p0^2((lam-1)p^2 - (lam+1)) - q0^2((lam-1)q^2 - (lam+1))"""
    return p0 ** 2 * ((lam - 1) * p ** 2 - (lam + 1)) - q0 ** 2 * ((lam - 1) * q ** 2 - (lam + 1))


def two_function_relation(velocity, p, q, lam):
    """(lam-1) x3' p q + (lam x1' - x2')(p + q) + (lam+1) x3' for a curve velocity (x1', x2', x3')"""
    d1, d2, d3 = velocity
    return (lam - 1) * d3 * p * q + (lam * d1 - d2) * (p + q) + (lam + 1) * d3


def specify_lambda(p, p0, q, q0):
    """The lambda for which (p, p0, q, q0) satisfies the four-function relation"""
    return (p0 ** 2 * (p ** 2 + 1) - q0 ** 2 * (q ** 2 + 1)) / (p0 ** 2 * (p ** 2 - 1) - q0 ** 2 * (q ** 2 - 1))


class CauchySurface:
    """Superposition of the split curves as an exact map of (t1, t2)"""

    def __init__(self, lifted: Lift, parts: Split):
        self.lifted = lifted
        self.parts = parts

    def _rows(self, t1, t2):
        sp = self.parts.plus(t1)
        sm = self.parts.minus(t2)
        return sp, sm

    def point(self, t1, t2) -> np.ndarray:
        sp, sm = self._rows(t1, t2)
        y = np.stack([sp[3] + sm[3], sp[4] + sm[4], sp[5] + sm[5]], axis=-1)
        return x_from_y(sp[0], sp[1], sm[0], sm[1], y)

    def chart(self, t1, t2) -> np.ndarray:
        sp, sm = self._rows(t1, t2)
        u = -0.5 * sp[1] * sm[1] * (sp[0] - sm[0])
        return np.stack([u, sp[2] + sm[2]], axis=-1)

    def frame(self, t1, t2) -> np.ndarray:
        sp, sm = self._rows(t1, t2)
        return so12_from_pq(sp[0], sm[0], sp[1], sm[1])

    def evaluator(self) -> SurfaceEvaluator:
        return SurfaceEvaluator(point=self.point, chart=self.chart, frame=self.frame)


@dataclass
class CauchySolution:
    """Lift, split curves, mesh and diagnostics of one Cauchy run"""
    curve: InitialCurve
    lift: Lift
    split: Split
    surface: CauchySurface
    mesh: SurfaceMesh
    diagnostics: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'curve': self.curve.to_dict(),
            'method': self.lift.method.value,
            'initial': list(self.lift.initial),
            't0': self.lift.t0,
            'mesh': self.mesh.to_dict(),
            'diagnostics': self.diagnostics
        }


def solve(curve: InitialCurve, r0: float = 1.0, grid: Tuple[int, int] = (41, 41),
          method=LiftMethod.DIRECT, t0: Optional[float] = None, s0: Optional[float] = None,
          v0: Optional[float] = None, t_range: Optional[Tuple[float, float]] = None,
          config: Optional[OdeConfig] = None, verify: bool = True) -> CauchySolution:
    """
    Full pipeline: lift, split, superpose, mesh over (t1, t2), verify.

    Args:
        curve: Initial curve
        r0: r(t0)
        v0: v(t0), defaults to the curve's v0
        grid: Mesh size over (t1, t2)
        method: Lift method
        t_range: Mesh range for both t1 and t2; defaults to the curve's domain
        verify: Run verify_embedding against u^2 (dv^2 - du^2)

    Returns:
        CauchySolution with diagnostics
    """
    admissibility = validate(curve)
    if not admissibility.passed:
        logger.warning(f"Initial curve {curve.name} fails the admissibility check: {admissibility.to_dict()}")
    _, constraint = check_quadrature_parametrization(curve)

    lifted = lift(curve, r0=r0, method=method, t0=t0, s0=s0, v0=v0, config=config)
    parts = split(lifted, config)
    surface = CauchySurface(lifted, parts)

    lo, hi = t_range or curve.domain
    ts = np.linspace(lo, hi, grid[0])
    ts2 = np.linspace(lo, hi, grid[1])
    mesh = SurfaceMesh.from_evaluator(
        ('t1', 't2'), ts, ts2, surface.evaluator(), Signature.LORENTZ,
        metadata={'kind': 'cauchy', 'curve': curve.name}
    )

    diag_t = np.linspace(lo, hi, 100)
    on_diagonal = surface.point(diag_t, diag_t)
    diagonal_error = float(np.max(np.abs(on_diagonal - np.moveaxis(curve.position(diag_t), 0, -1))))
    e3 = surface.frame(diag_t, diag_t)[..., :, 2]
    normal_plane = float(np.max(np.abs(e3[..., 0] - e3[..., 1])))

    diagnostics = {
        'admissibility': admissibility.to_dict(),
        'constraint_residual': constraint,
        'lift_residuals': lift_residuals(lifted),
        'split_conservation': parts.conservation,
        'diagonal_error': diagonal_error,
        'normal_plane_residual': normal_plane,
    }

    if verify:
        verify_embedding(mesh, g0_metric())
        diagnostics['verification'] = mesh.summary()

    logger.info(f"Cauchy surface built: diagonal error {diagonal_error:.3e}")
    return CauchySolution(curve=curve, lift=lifted, split=parts, surface=surface,
                          mesh=mesh, diagnostics=diagnostics)

