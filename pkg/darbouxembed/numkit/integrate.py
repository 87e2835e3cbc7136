"""ODE integration and quadrature used across the package"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy.integrate import quad, simpson, solve_ivp
from scipy.interpolate import CubicHermiteSpline
from scipy.optimize import brentq

from ..errors import IntegrationError, QuadratureError

logger = logging.getLogger(__name__)


class OdeMethod(Enum):
    """Supported integration schemes"""
    RK45 = "RK45"
    DOP853 = "DOP853"
    RK4 = "RK4"


@dataclass
class OdeConfig:
    """Integration settings; rtol/atol apply to adaptive methods, step to RK4"""
    method: OdeMethod = OdeMethod.RK45
    rtol: float = 1e-10
    atol: float = 1e-12
    step: float = 1e-3
    max_steps: int = 200000

    def __post_init__(self):
        if isinstance(self.method, str):
            self.method = OdeMethod(self.method)
        if self.rtol <= 0 or self.atol <= 0:
            raise ValueError("Tolerances must be positive")
        if self.step <= 0:
            raise ValueError("Fixed step must be positive")
        if self.max_steps < 1:
            raise ValueError("max_steps must be at least 1")

    def to_dict(self) -> Dict:
        return {
            'method': self.method.value,
            'rtol': self.rtol,
            'atol': self.atol,
            'step': self.step,
            'max_steps': self.max_steps
        }


@dataclass
class QuadConfig:
    """Quadrature settings: composite Simpson or adaptive Gauss-Kronrod"""
    method: str = 'adaptive'
    panels: int = 64
    tol: float = 1e-10

    def __post_init__(self):
        if self.method not in ('simpson', 'adaptive'):
            raise ValueError(f"Unknown quadrature method {self.method!r}")
        if self.panels < 2 or self.panels % 2:
            raise ValueError("Simpson panel count must be even and at least 2")
        if self.tol <= 0:
            raise ValueError("Quadrature tolerance must be positive")


@dataclass
class Trajectory:
    """
    Sampled solution of an ODE with a dense interpolant.

    Attributes:
        t: Accepted step times in integration order
        y: States, shape (n_states, len(t))
        dense: Callable t -> state (vectorised over t)
        t_events: Event times per event function
        terminated: True if a terminal event stopped the run
    """
    t: np.ndarray
    y: np.ndarray
    dense: Callable = field(repr=False)
    t_events: List[np.ndarray] = field(default_factory=list)
    terminated: bool = False

    def __call__(self, t):
        return self.dense(t)

    @property
    def t_min(self) -> float:
        return float(np.min(self.t))

    @property
    def t_max(self) -> float:
        return float(np.max(self.t))

    @property
    def final_state(self) -> np.ndarray:
        return self.y[:, -1]


class _GuardedRhs:
    """Counts evaluations and rejects non-finite derivatives"""

    def __init__(self, rhs: Callable, max_evals: int):
        self.rhs = rhs
        self.max_evals = max_evals
        self.evals = 0
        self.last_t = None
        self.last_y = None

    def __call__(self, t, y):
        self.evals += 1
        if self.evals > self.max_evals:
            raise IntegrationError(
                f"Step budget exhausted after {self.evals} evaluations",
                t_last=self.last_t,
                state_last=self.last_y
            )
        dy = np.asarray(self.rhs(t, y), dtype=float)
        if not np.all(np.isfinite(dy)):
            raise IntegrationError(
                f"Non-finite derivative at t={t:.6g}",
                t_last=self.last_t,
                state_last=self.last_y
            )
        self.last_t = float(t)
        self.last_y = np.array(y, dtype=float)
        return dy


def ode_solve(rhs: Callable, t0: float, y0: Sequence[float], t1: float,
              config: Optional[OdeConfig] = None,
              events: Optional[Sequence[Callable]] = None) -> Trajectory:
    """
    Integrate y' = rhs(t, y) from t0 to t1 (either direction).

    Args:
        rhs: Right-hand side returning an array like y
        t0: Start time
        y0: Initial state
        t1: End time
        config: Integration settings
        events: Event functions g(t, y); set g.terminal = True to stop on a root

    Returns:
        Trajectory with dense output
    """
    config = config or OdeConfig()
    y0 = np.asarray(y0, dtype=float)

    if not np.all(np.isfinite(y0)):
        raise IntegrationError("Non-finite initial state", t_last=t0, state_last=y0)

    if t1 == t0:
        const = y0.copy()
        return Trajectory(
            t=np.array([t0]),
            y=const[:, None],
            dense=lambda t: np.multiply.outer(const, np.ones_like(np.asarray(t, dtype=float)))
        )

    if config.method == OdeMethod.RK4:
        return _rk4_solve(rhs, t0, y0, t1, config, events or [])

    guarded = _GuardedRhs(rhs, config.max_steps * 13)
    sol = solve_ivp(
        guarded,
        (t0, t1),
        y0,
        method=config.method.value,
        rtol=config.rtol,
        atol=config.atol,
        dense_output=True,
        events=list(events) if events else None
    )

    if sol.status == -1:
        raise IntegrationError(
            f"Integration failed: {sol.message}",
            t_last=float(sol.t[-1]) if len(sol.t) else t0,
            state_last=sol.y[:, -1] if sol.y.size else y0
        )

    logger.debug(f"{config.method.value} took {len(sol.t)} steps over [{t0:.4g}, {t1:.4g}]")

    return Trajectory(
        t=sol.t,
        y=sol.y,
        dense=sol.sol,
        t_events=list(sol.t_events) if sol.t_events is not None else [],
        terminated=sol.status == 1
    )



class TwoSidedTrajectory:
    """Pieces integrated forward and backward from a common start t0"""

    def __init__(self, t0: float, forward: Trajectory, backward: Trajectory):
        self.t0 = t0
        self.forward = forward
        self.backward = backward

    @property
    def t_min(self) -> float:
        return self.backward.t_min

    @property
    def t_max(self) -> float:
        return self.forward.t_max

    @property
    def terminated(self) -> bool:
        return self.forward.terminated or self.backward.terminated

    def __call__(self, t) -> np.ndarray:
        """States as (n_states, *t.shape) for t of any shape"""
        t = np.asarray(t, dtype=float)
        ahead = _evaluate(self.forward, np.maximum(t, self.t0))
        behind = _evaluate(self.backward, np.minimum(t, self.t0))
        return np.where(t >= self.t0, ahead, behind)


def _evaluate(traj: Trajectory, t: np.ndarray) -> np.ndarray:
    flat = np.atleast_1d(traj(t.ravel()))
    return flat.reshape((flat.shape[0],) + t.shape)


def ode_solve_both_ways(rhs: Callable, t0: float, y0: Sequence[float], t_lo: float, t_hi: float,
                        config: Optional[OdeConfig] = None,
                        events: Optional[Sequence[Callable]] = None) -> TwoSidedTrajectory:
    """Integrate from t0 up to t_hi and down to t_lo; check .terminated for event stops"""
    if not t_lo <= t0 <= t_hi:
        raise ValueError(f"Start {t0} outside [{t_lo}, {t_hi}]")
    forward = ode_solve(rhs, t0, y0, t_hi, config, events)
    backward = ode_solve(rhs, t0, y0, t_lo, config, events)
    return TwoSidedTrajectory(t0, forward, backward)

def _rk4_solve(rhs: Callable, t0: float, y0: np.ndarray, t1: float,
               config: OdeConfig, events: Sequence[Callable]) -> Trajectory:
    """Classical fixed-step RK4 with cubic Hermite dense output"""
    n_steps = int(np.ceil(abs(t1 - t0) / config.step))
    if n_steps > config.max_steps:
        raise IntegrationError(
            f"RK4 needs {n_steps} steps, budget is {config.max_steps}",
            t_last=t0,
            state_last=y0
        )
    h = (t1 - t0) / n_steps

    ts = [t0]
    ys = [y0]
    fs = [np.asarray(rhs(t0, y0), dtype=float)]
    t_events: List[List[float]] = [[] for _ in events]
    terminated = False

    for i in range(n_steps):
        t, y, f = ts[-1], ys[-1], fs[-1]
        k2 = np.asarray(rhs(t + h / 2, y + h / 2 * f), dtype=float)
        k3 = np.asarray(rhs(t + h / 2, y + h / 2 * k2), dtype=float)
        k4 = np.asarray(rhs(t + h, y + h * k3), dtype=float)
        y_next = y + h / 6 * (f + 2 * k2 + 2 * k3 + k4)
        t_next = t0 + (i + 1) * h
        f_next = np.asarray(rhs(t_next, y_next), dtype=float)

        if not (np.all(np.isfinite(y_next)) and np.all(np.isfinite(f_next))):
            raise IntegrationError(f"Non-finite state at t={t_next:.6g}", t_last=t, state_last=y)

        stop = False
        for k, event in enumerate(events):
            g0, g1 = event(t, y), event(t_next, y_next)
            if g0 == 0 or np.sign(g0) == np.sign(g1):
                continue
            segment = CubicHermiteSpline([min(t, t_next), max(t, t_next)],
                                         np.stack([y, y_next] if h > 0 else [y_next, y], axis=1),
                                         np.stack([f, f_next] if h > 0 else [f_next, f], axis=1),
                                         axis=1)
            t_root = brentq(lambda s: event(s, segment(s)), min(t, t_next), max(t, t_next))
            t_events[k].append(t_root)
            if getattr(event, 'terminal', False):
                stop = True

        ts.append(t_next)
        ys.append(y_next)
        fs.append(f_next)
        if stop:
            terminated = True
            break

    t_arr = np.array(ts)
    y_arr = np.stack(ys, axis=1)
    f_arr = np.stack(fs, axis=1)
    order = np.argsort(t_arr)
    spline = CubicHermiteSpline(t_arr[order], y_arr[:, order], f_arr[:, order], axis=1)

    return Trajectory(
        t=t_arr,
        y=y_arr,
        dense=spline,
        t_events=[np.array(e) for e in t_events],
        terminated=terminated
    )


def integrate(func: Callable, a: float, b: float, config: Optional[QuadConfig] = None) -> float:
    """
    Definite integral of a scalar function.

    Raises:
        QuadratureError: On a non-finite sample or result
    """
    config = config or QuadConfig()
    if a == b:
        return 0.0

    def checked(t):
        value = func(t)
        if not np.all(np.isfinite(value)):
            raise QuadratureError(f"Non-finite integrand at t={float(np.ravel(t)[0]):.6g}")
        return value

    if config.method == 'simpson':
        ts = np.linspace(a, b, config.panels + 1)
        ys = np.asarray(checked(ts), dtype=float)
        if ys.shape != ts.shape:
            ys = np.array([float(checked(t)) for t in ts])
        result = float(simpson(ys, x=ts))
    else:
        result, _ = quad(lambda t: float(checked(t)), a, b,
                         epsabs=config.tol, epsrel=config.tol, limit=200)

    if not np.isfinite(result):
        raise QuadratureError(f"Non-finite integral over [{a}, {b}]")
    return float(result)
