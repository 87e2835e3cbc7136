"""Metric, curvature-jet and normal-form models"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, Optional, Tuple

import numpy as np
from scipy.optimize import newton

from ..errors import DegenerateMetricError, DomainError, InputFormatError
from ..numkit.functions import CatalogSmooth, Smooth1D, smooth_from_dict
from ..numkit.linalg import Signature

Interval = Tuple[float, float]


class SignatureClass(Enum):
    """Signature of a 2-metric"""
    RIEMANNIAN = "riemannian"
    LORENTZIAN = "lorentzian"

    @property
    def ambient(self) -> Signature:
        """Flat 3-space the metric embeds into"""
        return Signature.EUCLIDEAN if self is SignatureClass.RIEMANNIAN else Signature.LORENTZ


class DarbouxType(Enum):
    """Sign of the Gauss curvature on a Darboux-integrable metric"""
    ELLIPTIC = 1
    HYPERBOLIC = -1


@dataclass(frozen=True)
class Smooth2D:
    """
    Separable function f(u, v) = fu(u) * fv(v).

    Partials of any order up to 3 in each variable are exact products
    of the one-variable derivatives.
    """
    fu: Smooth1D
    fv: Smooth1D = field(default_factory=lambda: CatalogSmooth('const'))

    def __call__(self, u, v):
        return self.partial(u, v, 0, 0)

    def partial(self, u, v, du: int = 0, dv: int = 0):
        return self.fu.derivative(u, du) * self.fv.derivative(v, dv)

    def to_dict(self) -> Dict:
        return {'u': self.fu.to_dict(), 'v': self.fv.to_dict()}

    @classmethod
    def from_dict(cls, data) -> 'Smooth2D':
        if isinstance(data, dict) and ('u' in data or 'v' in data):
            fu = smooth_from_dict(data.get('u', {'name': 'const'}))
            fv = smooth_from_dict(data.get('v', {'name': 'const'}))
            return cls(fu, fv)
        return cls(smooth_from_dict(data))


@dataclass(frozen=True)
class OrthogonalMetric2D:
    """
    g = sign_u * E(u,v)^2 du^2 + sign_v * G(u,v)^2 dv^2

    The Riemannian case has both signs positive; the Lorentzian case has
    exactly one negative sign.
    """
    E: Smooth2D
    G: Smooth2D
    sign_u: int = 1
    sign_v: int = 1
    domain: Tuple[Interval, Interval] = ((-np.inf, np.inf), (-np.inf, np.inf))
    name: str = "custom"

    def __post_init__(self):
        if self.sign_u not in (1, -1) or self.sign_v not in (1, -1):
            raise InputFormatError("Metric signs must be +1 or -1")
        if self.sign_u < 0 and self.sign_v < 0:
            raise InputFormatError("Negative definite metrics are not supported; flip both signs")
        (u_lo, u_hi), (v_lo, v_hi) = self.domain
        if not (u_lo < u_hi and v_lo < v_hi):
            raise InputFormatError(f"Empty domain {self.domain}")

    @property
    def signature_class(self) -> SignatureClass:
        if self.sign_u > 0 and self.sign_v > 0:
            return SignatureClass.RIEMANNIAN
        return SignatureClass.LORENTZIAN

    @property
    def sigma(self) -> int:
        """+1 Riemannian, -1 Lorentzian"""
        return 1 if self.signature_class is SignatureClass.RIEMANNIAN else -1

    def contains(self, u, v) -> bool:
        (u_lo, u_hi), (v_lo, v_hi) = self.domain
        return bool(np.all((u >= u_lo) & (u <= u_hi) & (v >= v_lo) & (v <= v_hi)))

    def require_domain(self, u, v):
        if not self.contains(u, v):
            raise DomainError(f"Point outside the domain {self.domain} of metric {self.name}")

    def coefficients(self, u, v, tol: float = 1e-14) -> Tuple[np.ndarray, np.ndarray]:
        """
        Return (g_uu, g_vv).

        Raises:
            DegenerateMetricError: If E or G vanishes
        """
        e = self.E(u, v)
        g = self.G(u, v)
        if np.any(np.abs(e) <= tol) or np.any(np.abs(g) <= tol):
            raise DegenerateMetricError(f"Metric {self.name} degenerates at the requested point")
        return self.sign_u * e ** 2, self.sign_v * g ** 2

    def grid(self, n_u: int, n_v: int, interior: bool = True) -> Tuple[np.ndarray, np.ndarray]:
        """Uniform sample of the domain; interior drops the boundary lines"""
        (u_lo, u_hi), (v_lo, v_hi) = self.domain
        if not np.all(np.isfinite([u_lo, u_hi, v_lo, v_hi])):
            raise DomainError(f"Metric {self.name} has an unbounded domain; pass one explicitly")
        if interior:
            us = np.linspace(u_lo, u_hi, n_u + 2)[1:-1]
            vs = np.linspace(v_lo, v_hi, n_v + 2)[1:-1]
        else:
            us = np.linspace(u_lo, u_hi, n_u)
            vs = np.linspace(v_lo, v_hi, n_v)
        return us, vs

    def with_domain(self, domain: Tuple[Interval, Interval]) -> 'OrthogonalMetric2D':
        return OrthogonalMetric2D(self.E, self.G, self.sign_u, self.sign_v, domain, self.name)

    def to_dict(self) -> Dict:
        """Convert to the JSON metric format"""
        return {
            'name': self.name,
            'Eu': self.E.to_dict(),
            'Gv': self.G.to_dict(),
            'sign_u': self.sign_u,
            'sign_v': self.sign_v,
            'domain': [list(self.domain[0]), list(self.domain[1])]
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'OrthogonalMetric2D':
        """Create from the JSON metric format"""
        try:
            domain = data.get('domain', [[-np.inf, np.inf], [-np.inf, np.inf]])
            return cls(
                E=Smooth2D.from_dict(data['Eu']),
                G=Smooth2D.from_dict(data['Gv']),
                sign_u=int(data.get('sign_u', 1)),
                sign_v=int(data.get('sign_v', 1)),
                domain=(tuple(map(float, domain[0])), tuple(map(float, domain[1]))),
                name=data.get('name', 'custom')
            )
        except (KeyError, TypeError, IndexError) as e:
            raise InputFormatError(f"Malformed metric record: {e}") from e


@dataclass
class CurvatureJet:
    """
    Frame derivatives of a scalar up to second order at one point.

    first holds (f_1, f_2); second holds [[f_11, f_12], [f_21, f_22]] in
    the oriented orthonormal coframe. f_12 and f_21 differ by the
    connection terms and are both reported.
    """
    value: float
    first: np.ndarray
    second: np.ndarray
    at: Tuple[float, float] = (0.0, 0.0)
    K: Optional[float] = None  # Gauss curvature when value is q = |K|^(-3/4)

    @property
    def k(self) -> Optional[float]:
        return None if self.K is None else float(np.sqrt(abs(self.K)))

    def rotated(self, theta: float) -> 'CurvatureJet':
        """Re-express the jet in the frame rotated by theta"""
        c, s = np.cos(theta), np.sin(theta)
        R = np.array([[c, s], [-s, c]])
        return CurvatureJet(self.value, R @ self.first, R @ self.second @ R.T, self.at, self.K)

    def to_dict(self) -> Dict:
        return {
            'value': self.value,
            'first': self.first.tolist(),
            'second': self.second.tolist(),
            'at': list(self.at),
            'K': self.K
        }


class ProfileFamily(Enum):
    """Closed-form solutions of the profile equation, parametrised by u"""
    COSH = "cosh"
    SINH = "sinh"
    POWER = "power"
    COS = "cos"


# First-integral constants C in (q'/3)^2 = kappa q^(2/3) - C
_FAMILY_C = {
    ProfileFamily.COSH: 1.0,
    ProfileFamily.SINH: -1.0,
    ProfileFamily.POWER: 0.0,
    ProfileFamily.COS: -1.0,
}


def _family_jet(family: ProfileFamily, u):
    """(s, ds/du, q, q', q'', q''') of the unit-scale profile at parameter u"""
    u = np.asarray(u, dtype=float)
    if family is ProfileFamily.COSH:
        ch, sh = np.cosh(u), np.sinh(u)
        return ((u + sh * ch) / 2, ch ** 2, ch ** 3, 3 * sh, 3 / ch, -3 * sh / ch ** 4)
    if family is ProfileFamily.SINH:
        ch, sh = np.cosh(u), np.sinh(u)
        return ((sh * ch - u) / 2, sh ** 2, sh ** 3, 3 * ch, 3 / sh, -3 * ch / sh ** 4)
    if family is ProfileFamily.POWER:
        return (u ** 2 / 2, u, u ** 3, 3 * u, 3 / u, -3 / u ** 3)
    c, s = np.cos(u), np.sin(u)
    return ((u + s * c) / 2, c ** 2, c ** 3, -3 * s, -3 / c, -3 * s / c ** 4)


@dataclass(frozen=True)
class QProfile:
    """
    Solution q(s) of q'' = 3 kappa q^(-1/3) attached to a normal form.

    The profile is parametrised by the metric coordinate u; arclength s
    along the Killing-orthogonal geodesics is s(u). scale applies the
    similarity (s, q) -> (scale * s, scale^(3/2) * q).
    """
    family: ProfileFamily
    kappa: int
    u_domain: Interval
    scale: float = 1.0

    @property
    def first_integral_constant(self) -> float:
        return _FAMILY_C[self.family] * self.scale

    def rescaled(self, lam: float) -> 'QProfile':
        if lam <= 0:
            raise ValueError("Rescaling factor must be positive")
        return QProfile(self.family, self.kappa, self.u_domain, self.scale * lam)

    def jet(self, u) -> Tuple[np.ndarray, ...]:
        """(s, q, q', q'', q''') at parameter u, derivatives taken in s"""
        s, _, q, q1, q2, q3 = _family_jet(self.family, u)
        lam = self.scale
        return (lam * s, lam ** 1.5 * q, lam ** 0.5 * q1, lam ** -0.5 * q2, lam ** -1.5 * q3)

    def s_of_u(self, u):
        return self.scale * _family_jet(self.family, u)[0]

    def ds_du(self, u):
        return self.scale * _family_jet(self.family, u)[1]

    def u_of_s(self, s):
        """Invert s(u) by Newton iteration started from a tabulated guess"""
        s = np.asarray(s, dtype=float)
        lo, hi = self.u_domain
        table_u = np.linspace(lo, hi, 4001)
        table_s = self.s_of_u(table_u)
        if np.any(s < table_s[0] - 1e-12) or np.any(s > table_s[-1] + 1e-12):
            raise DomainError(f"s outside [{table_s[0]:.6g}, {table_s[-1]:.6g}]")
        guess = np.interp(s, table_s, table_u)
        return newton(lambda u: self.s_of_u(u) - s, guess, fprime=self.ds_du, tol=1e-14, maxiter=50)

    def ode_residual(self, u):
        _, q, _, q2, _ = self.jet(u)
        return q2 - 3 * self.kappa * np.cbrt(q) ** -1

    def first_integral_residual(self, u):
        _, q, q1, _, _ = self.jet(u)
        return (q1 / 3) ** 2 - self.kappa * np.cbrt(q) ** 2 + self.first_integral_constant

    def to_dict(self) -> Dict:
        return {
            'family': self.family.value,
            'kappa': self.kappa,
            'u_domain': list(self.u_domain),
            'scale': self.scale,
            'C': self.first_integral_constant
        }


@dataclass(frozen=True)
class KillingField:
    """
    Killing field d/dv of a catalog metric; v = 3 t in the profile chart,
    so |d/dt|^2 = +-q'^2.
    """
    metric_id: str
    causal_type: str  # 'spacelike' or 'timelike'
    sign: int  # sign of g(d/dv, d/dv)
    G: Callable = field(repr=False, compare=False)
    t_scale: float = 3.0

    def squared_length(self, u):
        """g(d/dv, d/dv) at coordinate u"""
        return self.sign * np.asarray(self.G(u), dtype=float) ** 2

    def squared_length_t(self, u):
        return self.t_scale ** 2 * self.squared_length(u)

    def to_dict(self) -> Dict:
        return {
            'metric_id': self.metric_id,
            'vector': 'd/dv',
            'causal_type': self.causal_type,
            't_scale': self.t_scale
        }


@dataclass(frozen=True)
class NormalFormCase:
    """One entry of the normal-form catalog"""
    case_id: str
    signature_class: SignatureClass
    darboux_type: DarbouxType
    killing_type: str  # 'spacelike' or 'timelike'
    metric: OrthogonalMetric2D
    curvature: Callable = field(repr=False, compare=False)  # closed-form K(u)
    profile: Optional[QProfile] = None
    description: str = ""

    @property
    def epsilon(self) -> int:
        return self.darboux_type.value

    def to_dict(self) -> Dict:
        return {
            'id': self.case_id,
            'signature': self.signature_class.value,
            'type': self.darboux_type.name.lower(),
            'epsilon': self.epsilon,
            'killing_type': self.killing_type,
            'metric': self.metric.to_dict(),
            'profile': self.profile.to_dict() if self.profile else None,
            'description': self.description
        }
