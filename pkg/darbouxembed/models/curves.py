"""Generator pairs, singular curves and initial curves"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..errors import GeneratorError, InputFormatError
from ..numkit.functions import PolySmooth, Poly1D, Smooth1D, smooth_from_dict

Interval = Tuple[float, float]


@dataclass(frozen=True)
class GeneratorPair:
    """
    Functions F(p), G(q) with F''' > 0 and G''' > 0 on their domains.

    p0_sign and q0_sign select the branch of the fourth roots
    p0 = +-(8 F''')^(1/4), q0 = +-(8 G''')^(1/4).
    """
    F: Smooth1D
    G: Smooth1D
    p_domain: Interval = (-1.0, 2.0)
    q_domain: Interval = (-1.0, 3.0)
    p0_sign: int = 1
    q0_sign: int = 1

    def validate(self, samples: int = 2001) -> 'GeneratorPair':
        """
        Raises:
            GeneratorError: If F''' or G''' is not positive on a dense sample
        """
        for name, func, (lo, hi) in (('F', self.F, self.p_domain), ('G', self.G, self.q_domain)):
            if not lo < hi:
                raise GeneratorError(f"Empty domain [{lo}, {hi}] for {name}")
            ts = np.linspace(lo, hi, samples)
            third = np.asarray(func.derivative(ts, 3), dtype=float)
            bad = ~(third > 0)
            if np.any(bad):
                where = ts[np.argmax(bad)]
                raise GeneratorError(f"{name}''' <= 0 at {where:.6g}; generators need a positive third derivative")
        return self

    def p0(self, p):
        return self.p0_sign * (8 * np.asarray(self.F.derivative(p, 3), dtype=float)) ** 0.25

    def q0(self, q):
        return self.q0_sign * (8 * np.asarray(self.G.derivative(q, 3), dtype=float)) ** 0.25

    def to_dict(self) -> Dict:
        return {
            'F': self.F.to_dict(),
            'G': self.G.to_dict(),
            'p_domain': list(self.p_domain),
            'q_domain': list(self.q_domain),
            'p0_sign': self.p0_sign,
            'q0_sign': self.q0_sign
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'GeneratorPair':
        try:
            return cls(
                F=smooth_from_dict(data['F']),
                G=smooth_from_dict(data['G']),
                p_domain=tuple(data.get('p_domain', (-1.0, 2.0))),
                q_domain=tuple(data.get('q_domain', (-1.0, 3.0))),
                p0_sign=int(data.get('p0_sign', 1)),
                q0_sign=int(data.get('q0_sign', 1))
            )
        except (KeyError, TypeError) as e:
            raise InputFormatError(f"Malformed generator record: {e}") from e

    @classmethod
    def constant(cls, eps1: float, eps2: float, p_domain: Interval = (-1.0, 2.0),
                 q_domain: Interval = (-1.0, 3.0)) -> 'GeneratorPair':
        """F = eps1^4 p^3 / 48, G = eps2^4 q^3 / 48 (constant p0 = eps1, q0 = eps2)"""
        F = PolySmooth(Poly1D((0.0, 0.0, 0.0, eps1 ** 4 / 48)))
        G = PolySmooth(Poly1D((0.0, 0.0, 0.0, eps2 ** 4 / 48)))
        return cls(F, G, p_domain, q_domain)


@dataclass
class SingularCurve:
    """
    Integral curve of one singular system, as a function of its parameter.

    components(t) returns (6, ...) rows (p or q, p0 or q0, v, y1, y2, y3);
    side is '+' (p-side) or '-' (q-side).
    """
    side: str
    components: Callable = field(repr=False)
    domain: Interval = (-np.inf, np.inf)
    label: str = ""

    def __post_init__(self):
        if self.side not in ('+', '-'):
            raise ValueError(f"Singular curve side must be '+' or '-', got {self.side!r}")

    def __call__(self, t) -> np.ndarray:
        return np.asarray(self.components(t), dtype=float)


@dataclass(frozen=True)
class InitialCurve:
    """
    Curve x(t) in R^{1,2} prescribed for the Cauchy problem.

    v0 is the value of v at the start parameter, used when a lift is not
    given one explicitly.
    """
    x1: Smooth1D
    x2: Smooth1D
    x3: Smooth1D
    domain: Interval = (0.5, 1.5)
    t0: Optional[float] = None
    name: str = "custom"
    v0: float = 0.0

    def position(self, t) -> np.ndarray:
        return np.stack([np.asarray(c(t), dtype=float) for c in (self.x1, self.x2, self.x3)], axis=0)

    def velocity(self, t) -> np.ndarray:
        return np.stack([np.asarray(c.derivative(t, 1), dtype=float) for c in (self.x1, self.x2, self.x3)], axis=0)

    def acceleration(self, t) -> np.ndarray:
        return np.stack([np.asarray(c.derivative(t, 2), dtype=float) for c in (self.x1, self.x2, self.x3)], axis=0)

    @property
    def start(self) -> float:
        return self.t0 if self.t0 is not None else 0.5 * (self.domain[0] + self.domain[1])

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'x1': self.x1.to_dict(),
            'x2': self.x2.to_dict(),
            'x3': self.x3.to_dict(),
            'domain': list(self.domain),
            't0': self.t0,
            'v0': self.v0
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'InitialCurve':
        try:
            domain = tuple(float(x) for x in data['domain'])
            t0 = data.get('t0')
            return cls(
                x1=smooth_from_dict(data['x1']),
                x2=smooth_from_dict(data['x2']),
                x3=smooth_from_dict(data['x3']),
                domain=domain,
                t0=None if t0 is None else float(t0),
                name=data.get('name', 'custom'),
                v0=float(data.get('v0', 0.0))
            )
        except (KeyError, TypeError, ValueError) as e:
            raise InputFormatError(f"Malformed curve record: {e}") from e

    @classmethod
    def example2(cls) -> 'InitialCurve':
        """x = ((3t + 4t^3)/8, (3t - 4t^3)/8, 3t^2/4) on [0.5, 2.5], t0 = 1, v0 = 3/2"""
        return cls(
            x1=PolySmooth(Poly1D((0.0, 3 / 8, 0.0, 4 / 8))),
            x2=PolySmooth(Poly1D((0.0, 3 / 8, 0.0, -4 / 8))),
            x3=PolySmooth(Poly1D((0.0, 0.0, 3 / 4))),
            domain=(0.5, 2.5),
            t0=1.0,
            name='example2',
            v0=1.5
        )


@dataclass
class LiftState:
    """Lift data (r, s, v) with the derived first integrals at parameter t"""
    t: float
    r: float
    s: float
    v: float
    c: float

    @property
    def p(self) -> float:
        return self.c + self.s

    @property
    def q(self) -> float:
        return self.c - self.s

    @property
    def u(self) -> float:
        return -self.r ** 2 * self.s

    def to_dict(self) -> Dict:
        return {
            't': self.t, 'r': self.r, 's': self.s, 'v': self.v,
            'c': self.c, 'p': self.p, 'q': self.q, 'u': self.u
        }
