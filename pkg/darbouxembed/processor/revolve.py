"""Riemannian catalog surfaces swept by an ambient rotation or screw motion"""

import logging
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple, Union

import numpy as np
from scipy.spatial import cKDTree
from scipy.spatial.transform import Rotation

from ..errors import DomainError, IntegrationError, ProfileSingularityError
from ..geometry.catalog import catalog
from ..geometry.verify import verify_embedding
from ..models.metric import NormalFormCase, SignatureClass
from ..models.mesh import SurfaceEvaluator, SurfaceMesh
from ..numkit.differentiate import grid_first_partials
from ..numkit.integrate import OdeConfig, OdeMethod, TwoSidedTrajectory, ode_solve_both_ways
from ..numkit.linalg import Signature

logger = logging.getLogger(__name__)

# z1 below this fraction of alpha ends the profile
BOUNDARY_FRACTION = 1e-8

STATE_SIZE = 14
_X, _E1, _E2, _E3 = slice(0, 3), slice(3, 6), slice(6, 9), slice(9, 12)
_Z1, _Z2 = 12, 13


@dataclass(frozen=True)
class ExtrinsicParams:
    """Angular speed alpha = |Z| and slope beta = q' z2 of the ambient Killing field"""
    alpha: float
    beta: float = 0.0

    def __post_init__(self):
        if not self.alpha > 0:
            raise ValueError(f"alpha must be positive, got {self.alpha}")

    def z_initial(self, q1: float, q2: float, s: float = 0.0) -> Tuple[float, float]:
        """
        (z1, z2) at a profile point with z1 on the positive branch.

        Raises:
            ProfileSingularityError: If alpha^2 - beta^2/q'^2 - q''^2 <= 0
        """
        z2 = self.beta / q1
        radicand = self.alpha ** 2 - z2 ** 2 - q2 ** 2
        if radicand <= 0:
            raise ProfileSingularityError(
                f"alpha={self.alpha}, beta={self.beta} leave no real z1 at s={s:.6g} "
                f"(alpha^2 - beta^2/q'^2 - q''^2 = {radicand:.3e})",
                s=s
            )
        return float(np.sqrt(radicand)), float(z2)

    def to_dict(self) -> Dict:
        return {'alpha': self.alpha, 'beta': self.beta}


@dataclass
class ProfileState:
    """Position, Euclidean frame and Killing components at one profile point"""
    s: float
    u: float
    x: np.ndarray
    e1: np.ndarray
    e2: np.ndarray
    e3: np.ndarray
    z1: float
    z2: float

    @property
    def frame(self) -> np.ndarray:
        return np.stack([self.e1, self.e2, self.e3], axis=-1)

    def as_array(self) -> np.ndarray:
        return np.concatenate([self.x, self.e1, self.e2, self.e3, [self.z1, self.z2]])

    @classmethod
    def from_array(cls, s: float, u: float, state) -> 'ProfileState':
        state = np.asarray(state, dtype=float)
        return cls(s=s, u=u, x=state[_X], e1=state[_E1], e2=state[_E2], e3=state[_E3],
                   z1=float(state[_Z1]), z2=float(state[_Z2]))

    def to_dict(self) -> Dict:
        return {
            's': self.s, 'u': self.u, 'x': self.x.tolist(),
            'e1': self.e1.tolist(), 'e2': self.e2.tolist(), 'e3': self.e3.tolist(),
            'z1': self.z1, 'z2': self.z2
        }


def _riemannian_case(case: Union[str, NormalFormCase]) -> NormalFormCase:
    case = catalog(case) if isinstance(case, str) else case
    if case.signature_class is not SignatureClass.RIEMANNIAN:
        raise DomainError(f"Extrinsic symmetry sweeps need a Riemannian case, got {case.case_id}")
    return case


def profile_ode_rhs(case: NormalFormCase, params: ExtrinsicParams, state: np.ndarray, u: float) -> np.ndarray:
    """
    Derivative of the profile state with respect to s at parameter u.

    The connection along the profile is w12 = 0, w32 = z2/q',
    w31 = (q''' - z2^2/q')/z1.

    Raises:
        ProfileSingularityError: If z1 vanishes
    """
    _, _, q1, q2, q3 = case.profile.jet(u)
    z1, z2 = state[_Z1], state[_Z2]
    if z1 == 0:
        raise ProfileSingularityError("z1 = 0 on the profile", s=float(case.profile.s_of_u(u)))

    w31 = (q3 - z2 ** 2 / q1) / z1
    w32 = z2 / q1
    e1, e2, e3 = state[_E1], state[_E2], state[_E3]

    out = np.empty(STATE_SIZE)
    out[_X] = e1
    out[_E1] = e3 * w31
    out[_E2] = e3 * w32
    out[_E3] = -e1 * w31 - e2 * w32
    out[_Z1] = q2 / z1 * (z2 ** 2 / q1 - q3)
    out[_Z2] = -z2 * q2 / q1
    return out


class ProfileTrajectory:
    """Integrated profile curve, evaluated by the metric coordinate u"""

    def __init__(self, case: NormalFormCase, params: ExtrinsicParams, u_start: float,
                 path: TwoSidedTrajectory, boundary_s: Optional[float] = None):
        self.case = case
        self.params = params
        self.u_start = u_start
        self.path = path
        self.boundary_s = boundary_s

    @property
    def u_range(self) -> Tuple[float, float]:
        return self.path.t_min, self.path.t_max

    @property
    def s_range(self) -> Tuple[float, float]:
        lo, hi = self.u_range
        return float(self.case.profile.s_of_u(lo)), float(self.case.profile.s_of_u(hi))

    def state(self, u) -> np.ndarray:
        """(14, *u.shape)"""
        return self.path(u)

    def position(self, u) -> np.ndarray:
        return np.moveaxis(self.state(u)[_X], 0, -1)

    def frame(self, u) -> np.ndarray:
        """(..., 3, 3) with columns e1, e2, e3"""
        st = self.state(u)
        return np.stack([np.moveaxis(st[sl], 0, -1) for sl in (_E1, _E2, _E3)], axis=-1)

    def at(self, u: float) -> ProfileState:
        return ProfileState.from_array(float(self.case.profile.s_of_u(u)), float(u), self.state(np.array(u)))

    def killing_vector(self, u) -> np.ndarray:
        """Z = z1 e1 + z2 e2 - q'' e3 reconstructed at each u, shape (..., 3)"""
        st = self.state(u)
        _, _, _, q2, _ = self.case.profile.jet(u)
        Z = st[_Z1] * st[_E1] + st[_Z2] * st[_E2] - q2 * st[_E3]
        return np.moveaxis(Z, 0, -1)

    def translation_part(self, u) -> np.ndarray:
        """W = q' e2 - x x Z at each u, shape (..., 3)"""
        st = self.state(u)
        _, _, q1, _, _ = self.case.profile.jet(u)
        e2 = np.moveaxis(st[_E2], 0, -1)
        x = np.moveaxis(st[_X], 0, -1)
        return np.asarray(q1)[..., None] * e2 - np.cross(x, self.killing_vector(u))

    def conserved(self, u) -> Dict[str, np.ndarray]:
        """z2 q' and z1^2 + z2^2 + q''^2 along the profile"""
        st = self.state(u)
        _, _, q1, q2, _ = self.case.profile.jet(u)
        return {
            'slope': st[_Z2] * q1,
            'speed': st[_Z1] ** 2 + st[_Z2] ** 2 + q2 ** 2
        }

    def diagnostics(self, samples: int = 201) -> Dict[str, float]:
        us = np.linspace(*self.u_range, samples)
        cons = self.conserved(us)
        frames = self.frame(us)
        gram = np.swapaxes(frames, -1, -2) @ frames
        W = self.translation_part(us)
        Z = self.killing_vector(us)
        return {
            'slope_drift': float(np.max(np.abs(cons['slope'] - self.params.beta))),
            'speed_drift': float(np.max(np.abs(cons['speed'] - self.params.alpha ** 2))),
            'frame_defect': float(np.max(np.abs(gram - np.eye(3)))),
            'W_drift': float(np.max(np.abs(W - W[0]))),
            'Z_drift': float(np.max(np.abs(Z - Z[0]))),
        }


def integrate_profile(case: Union[str, NormalFormCase], params: ExtrinsicParams,
                      s_range: Tuple[float, float], config: Optional[OdeConfig] = None,
                      pad: float = 0.01) -> ProfileTrajectory:
    """
    Integrate the profile from the start of s_range, with the initial frame
    equal to the standard basis and x(s_start) = 0.

    The state is carried in the coordinate u with d/du = (ds/du) d/ds; the run
    extends slightly past both ends of the range so mesh stencils stay inside.
    A z1 that drops to BOUNDARY_FRACTION * alpha stops the run and is reported
    as boundary_s.

    Raises:
        ProfileSingularityError: If the initial z1 is not real
        DomainError: If s_range leaves the profile's domain
    """
    case = _riemannian_case(case)
    profile = case.profile
    s_lo, s_hi = s_range
    if not s_lo < s_hi:
        raise DomainError(f"Empty s range [{s_lo}, {s_hi}]")
    u_lo, u_hi = profile.u_of_s(np.array([s_lo, s_hi]))
    dom_lo, dom_hi = profile.u_domain
    width = u_hi - u_lo
    run_lo, run_hi = max(dom_lo, u_lo - pad * width), min(dom_hi, u_hi + pad * width)

    _, _, q1, q2, _ = profile.jet(u_lo)
    z1, z2 = params.z_initial(float(q1), float(q2), s=s_lo)
    y0 = np.concatenate([np.zeros(3), np.eye(3).ravel(), [z1, z2]])

    def rhs(u, y):
        return profile.ds_du(u) * profile_ode_rhs(case, params, y, u)

    def boundary(u, y):
        return y[_Z1] - BOUNDARY_FRACTION * params.alpha
    boundary.terminal = True

    config = config or OdeConfig(method=OdeMethod.DOP853)
    try:
        path = ode_solve_both_ways(rhs, float(u_lo), y0, run_lo, run_hi, config, events=[boundary])
    except IntegrationError as e:
        logger.error(f"Profile integration for {case.case_id} failed near u={e.t_last}: {e}")
        raise

    boundary_s = None
    if path.terminated:
        hits = [float(te[0]) for traj in (path.forward, path.backward)
                for te in traj.t_events if len(te)]
        if hits:
            boundary_s = float(profile.s_of_u(hits[0]))
            logger.warning(f"Profile of {case.case_id} reaches z1 = 0 at s={boundary_s:.6g}")

    logger.info(f"Profile of {case.case_id} integrated over u in [{path.t_min:.4g}, {path.t_max:.4g}]")
    return ProfileTrajectory(case, params, float(u_lo), path, boundary_s)


@dataclass(frozen=True)
class AmbientKilling:
    """
    Euclidean Killing field V(x) = W + x x Z.

    Its flow is a rotation with angular velocity -Z about the line through
    axis_point, combined with translation pitch * Z per unit time.
    """
    W: np.ndarray
    Z: np.ndarray

    def __post_init__(self):
        if not np.linalg.norm(self.Z) > 0:
            raise ValueError("Killing field needs a nonzero rotation part Z")

    @classmethod
    def from_profile(cls, profile: ProfileTrajectory, u: Optional[float] = None) -> 'AmbientKilling':
        u = profile.u_start if u is None else u
        u = np.array(u)
        return cls(W=np.asarray(profile.translation_part(u), dtype=float),
                   Z=np.asarray(profile.killing_vector(u), dtype=float))

    @property
    def angular_speed(self) -> float:
        return float(np.linalg.norm(self.Z))

    @property
    def axis_direction(self) -> np.ndarray:
        return self.Z / self.angular_speed

    @property
    def pitch(self) -> float:
        return float(self.W @ self.Z / (self.Z @ self.Z))

    @property
    def axis_point(self) -> np.ndarray:
        return np.cross(self.W, self.Z) / (self.Z @ self.Z)

    def velocity(self, x) -> np.ndarray:
        return self.W + np.cross(np.asarray(x, dtype=float), self.Z)

    def rotation(self, t) -> Rotation:
        t = np.asarray(t, dtype=float).ravel()
        return Rotation.from_rotvec(-t[:, None] * self.Z[None, :])

    def flow(self, t, x) -> np.ndarray:
        """Image of points x (..., 3) under the time-t flow, t broadcast against x[..., 0]"""
        x = np.asarray(x, dtype=float)
        t, _ = np.broadcast_arrays(np.asarray(t, dtype=float), x[..., 0])
        rel = (x - self.axis_point).reshape(-1, 3)
        moved = self.rotation(t).apply(rel).reshape(x.shape)
        return self.axis_point + moved + (self.pitch * t)[..., None] * self.Z

    def flow_frame(self, t, frame) -> np.ndarray:
        """Push (..., 3, 3) frames forward by the rotation part of the flow"""
        frame = np.asarray(frame, dtype=float)
        t, _ = np.broadcast_arrays(np.asarray(t, dtype=float), frame[..., 0, 0])
        R = self.rotation(t).as_matrix().reshape(frame.shape)
        return R @ frame

    def to_dict(self) -> Dict:
        return {
            'W': self.W.tolist(),
            'Z': self.Z.tolist(),
            'axis_point': self.axis_point.tolist(),
            'pitch': self.pitch
        }


class SweptSurface:
    """(u, t) -> flow_t(profile(u)) with the chart (u, v = 3 sign(q') t)"""

    def __init__(self, profile: ProfileTrajectory, killing: AmbientKilling):
        self.profile = profile
        self.killing = killing
        self.orientation = float(np.sign(profile.case.profile.jet(profile.u_start)[2]))

    def point(self, u, t) -> np.ndarray:
        return self.killing.flow(t, self.profile.position(u))

    def chart(self, u, t) -> np.ndarray:
        u, t = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(t, dtype=float))
        return np.stack([u, 3 * self.orientation * t], axis=-1)

    def chart_jacobian(self, u, t) -> np.ndarray:
        u = np.asarray(u, dtype=float)
        J = np.zeros(u.shape + (2, 2))
        J[..., 0, 0] = 1.0
        J[..., 1, 1] = 3 * self.orientation
        return J

    def frame(self, u, t) -> np.ndarray:
        return self.killing.flow_frame(t, self.profile.frame(u))

    def velocity(self, u, t) -> np.ndarray:
        return self.killing.velocity(self.point(u, t))

    def evaluator(self) -> SurfaceEvaluator:
        return SurfaceEvaluator(point=self.point, chart=self.chart,
                                chart_jacobian=self.chart_jacobian, frame=self.frame)


def sweep(profile: ProfileTrajectory, killing: Optional[AmbientKilling] = None,
          t_range: Optional[Tuple[float, float]] = None, grid: Tuple[int, int] = (40, 40),
          s_range: Optional[Tuple[float, float]] = None, verify: bool = True) -> SurfaceMesh:
    """
    Mesh of the swept surface over (u, t).

    Args:
        profile: Integrated profile
        killing: Ambient field; defaults to the one read off the profile
        t_range: Flow times, defaults to one symmetric full turn (-pi/alpha, pi/alpha)
        grid: (n_s, n_t)
        s_range: Arclength range, clipped to where the profile exists
        verify: Compare the induced metric with the catalog metric

    Returns:
        SurfaceMesh with axes ('u', 't') and an exact evaluator
    """
    killing = killing or AmbientKilling.from_profile(profile)
    if t_range is None:
        half_turn = np.pi / killing.angular_speed
        t_range = (-half_turn, half_turn)

    prof = profile.case.profile
    u_lo, u_hi = profile.u_range
    if s_range is not None:
        req_lo, req_hi = prof.u_of_s(np.array(s_range, dtype=float))
        if req_lo < u_lo or req_hi > u_hi:
            logger.warning(f"Requested s range {s_range} clipped to the integrated profile")
        u_lo, u_hi = max(u_lo, req_lo), min(u_hi, req_hi)

    surface = SweptSurface(profile, killing)
    us = np.linspace(u_lo, u_hi, grid[0])
    ts = np.linspace(t_range[0], t_range[1], grid[1])
    mesh = SurfaceMesh.from_evaluator(
        ('u', 't'), us, ts, surface.evaluator(), Signature.EUCLIDEAN,
        metadata={
            'kind': 'revolve',
            'metric': profile.case.case_id,
            'params': profile.params.to_dict(),
            'killing': killing.to_dict(),
            'boundary_s': profile.boundary_s
        }
    )
    if verify:
        metric = profile.case.metric.with_domain((profile.case.metric.domain[0], (-np.inf, np.inf)))
        verify_embedding(mesh, metric)
        mesh.residuals['killing_length'] = _killing_length_residual(surface, mesh)
    logger.info(f"Swept {profile.case.case_id} into a {grid[0]}x{grid[1]} mesh")
    return mesh


def _killing_length_residual(surface: SweptSurface, mesh: SurfaceMesh) -> np.ndarray:
    """| |dX/dt| - |q'(s)| | per vertex"""
    U, T = mesh.grid()
    _, X_t = grid_first_partials(surface.point, U, T)
    _, _, q1, _, _ = surface.profile.case.profile.jet(U)
    return np.abs(np.linalg.norm(X_t, axis=-1) - np.abs(q1))


def canonical_alignment(points: np.ndarray, killing: AmbientKilling) -> np.ndarray:
    """
    Rigid motion of points (..., 3): axis to the z-axis with Z along +z,
    the first point to azimuth 0 and height 0.
    """
    points = np.asarray(points, dtype=float)
    flat = points.reshape(-1, 3) - killing.axis_point
    to_z, _ = Rotation.align_vectors([[0.0, 0.0, 1.0]], [killing.axis_direction])
    flat = to_z.apply(flat)
    first = flat[0]
    spin = Rotation.from_euler('z', -np.arctan2(first[1], first[0]))
    flat = spin.apply(flat)
    flat[:, 2] -= flat[0, 2]
    return flat.reshape(points.shape)


def shape_diagnostics(mesh: SurfaceMesh, profile: ProfileTrajectory,
                      killing: Optional[AmbientKilling] = None) -> Dict[str, Optional[float]]:
    """Axis distances, pitch, paraboloid deviation and profile drift"""
    killing = killing or AmbientKilling.from_profile(profile)
    aligned = canonical_alignment(mesh.points, killing)
    radius2 = aligned[..., 0] ** 2 + aligned[..., 1] ** 2
    offset = aligned[0, 0, 2] - 0.5 * radius2[0, 0]
    out = {
        'axis_distance_min': float(np.sqrt(np.min(radius2))),
        'axis_distance_max': float(np.sqrt(np.max(radius2))),
        'pitch': killing.pitch,
        'paraboloid_deviation': float(np.max(np.abs(aligned[..., 2] - 0.5 * radius2 - offset))),
        'boundary_s': profile.boundary_s,
    }
    out.update(profile.diagnostics())
    return out


def hausdorff_distance(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two point clouds"""
    a = np.asarray(a, dtype=float).reshape(-1, 3)
    b = np.asarray(b, dtype=float).reshape(-1, 3)
    d_ab, _ = cKDTree(b).query(a)
    d_ba, _ = cKDTree(a).query(b)
    return float(max(np.max(d_ab), np.max(d_ba)))


def mirror_distance(mesh: SurfaceMesh, mirrored: SurfaceMesh, normal=(0.0, 1.0, 0.0)) -> float:
    """Hausdorff distance after reflecting the second mesh through the plane with the given normal"""
    n = np.asarray(normal, dtype=float)
    n = n / np.linalg.norm(n)
    pts = mirrored.points - 2 * (mirrored.points @ n)[..., None] * n
    return hausdorff_distance(mesh.points, pts)


def killing_predicate(mesh: SurfaceMesh, Y: Union[Callable, np.ndarray], Z) -> Dict[str, np.ndarray]:
    """
    Residuals of the equations a tangent Killing field Y = y1 e1 + y2 e2 with
    ambient rotation part Z satisfies along a framed surface:

        dy1 + y2 w12 - z3 w2
        dy2 + y1 w21 + z3 w1
        y1 w31 + y2 w32 - z2 w1 + z1 w2
        dz_a + z_b w_ab

    with w_i = <dx, e_i>, w_ab = <de_b, e_a> and z_a = <Z, e_a>, each taken in
    both grid directions.

    Args:
        mesh: Mesh carrying an evaluator with a frame, or sampled frames
        Y: Callable (A, B) -> (..., 3) or samples of shape (n_a, n_b, 3)
        Z: Ambient vector

    Returns:
        Dict channel -> (n_a, n_b) max over both directions
    """
    Z = np.asarray(Z, dtype=float)
    A, B = mesh.grid()
    ev = mesh.evaluator

    if ev is not None and ev.frame is not None:
        def frame_fn(a, b):
            return np.asarray(ev.frame(a, b), dtype=float)
        F = frame_fn(A, B)
        X_d = grid_first_partials(ev.point, A, B)
        F_d = grid_first_partials(frame_fn, A, B)
    elif mesh.frames is not None:
        F = mesh.frames
        X_d = [np.gradient(mesh.points, vals, axis=k, edge_order=2)
               for k, vals in enumerate((mesh.a_values, mesh.b_values))]
        F_d = [np.gradient(F, vals, axis=k, edge_order=2)
               for k, vals in enumerate((mesh.a_values, mesh.b_values))]
    else:
        raise ValueError("Killing predicate needs frames on the mesh")

    if callable(Y) and ev is not None and ev.frame is not None:
        def y_fn(a, b):
            return np.einsum('...i,...ij->...j', Y(a, b), frame_fn(a, b))
        y = y_fn(A, B)
        y_d = grid_first_partials(y_fn, A, B)
    else:
        samples = Y(A, B) if callable(Y) else np.asarray(Y, dtype=float)
        y = np.einsum('...i,...ij->...j', samples, F)
        y_d = [np.gradient(y, vals, axis=k, edge_order=2)
               for k, vals in enumerate((mesh.a_values, mesh.b_values))]

    z = np.einsum('i,...ij->...j', Z, F)

    out = {name: np.zeros(A.shape) for name in ('y1', 'y2', 'normal', 'z')}
    for k in range(2):
        w = np.einsum('...i,...ij->...j', X_d[k], F)
        # conn[..., a, b] = <de_b, e_a>
        conn = np.swapaxes(F, -1, -2) @ F_d[k]
        dz = np.einsum('i,...ij->...j', Z, F_d[k])
        terms = {
            'y1': y_d[k][..., 0] + y[..., 1] * conn[..., 0, 1] - z[..., 2] * w[..., 1],
            'y2': y_d[k][..., 1] + y[..., 0] * conn[..., 1, 0] + z[..., 2] * w[..., 0],
            'normal': (y[..., 0] * conn[..., 2, 0] + y[..., 1] * conn[..., 2, 1]
                       - z[..., 1] * w[..., 0] + z[..., 0] * w[..., 1]),
            'z': np.max(np.abs(dz + np.einsum('...b,...ab->...a', z, conn)), axis=-1),
        }
        for name, value in terms.items():
            out[name] = np.maximum(out[name], np.abs(value))
    return out


@dataclass
class RevolveResult:
    """Profile, ambient field, mesh and diagnostics of one sweep"""
    profile: ProfileTrajectory
    killing: AmbientKilling
    mesh: SurfaceMesh
    diagnostics: Dict = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            'metric': self.profile.case.case_id,
            'params': self.profile.params.to_dict(),
            'killing': self.killing.to_dict(),
            'mesh': self.mesh.to_dict(),
            'diagnostics': self.diagnostics
        }


def revolve(case: Union[str, NormalFormCase], params: ExtrinsicParams, s_range: Tuple[float, float],
            grid: Tuple[int, int] = (40, 40), t_range: Optional[Tuple[float, float]] = None,
            config: Optional[OdeConfig] = None, verify: bool = True) -> RevolveResult:
    """Integrate, sweep, verify and collect shape diagnostics"""
    profile = integrate_profile(case, params, s_range, config)
    killing = AmbientKilling.from_profile(profile)
    mesh = sweep(profile, killing, t_range=t_range, grid=grid, s_range=s_range, verify=verify)
    diagnostics = shape_diagnostics(mesh, profile, killing)
    if verify:
        predicate = killing_predicate(mesh, SweptSurface(profile, killing).velocity, killing.Z)
        diagnostics['killing_predicate'] = {k: float(np.max(v)) for k, v in predicate.items()}
        diagnostics['verification'] = mesh.summary()
    return RevolveResult(profile=profile, killing=killing, mesh=mesh, diagnostics=diagnostics)
