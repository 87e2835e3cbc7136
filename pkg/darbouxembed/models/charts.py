"""Coordinate records for the frame bundle of the model metric u^2 (dv^2 - du^2)"""

from dataclasses import dataclass
from typing import Dict

import numpy as np

from ..errors import ChartError


@dataclass(frozen=True)
class ACoords:
    """Coordinates (a1, a2, a3) on SO(1,2) with a1 > 0"""
    a1: float
    a2: float
    a3: float

    def __post_init__(self):
        if not self.a1 > 0:
            raise ChartError(f"a1 must be positive, got {self.a1}")

    def as_array(self) -> np.ndarray:
        return np.array([self.a1, self.a2, self.a3])

    def to_dict(self) -> Dict:
        return {'a1': self.a1, 'a2': self.a2, 'a3': self.a3}

    @classmethod
    def from_dict(cls, data: Dict) -> 'ACoords':
        return cls(**data)


@dataclass(frozen=True)
class PQPoint:
    """
    Point of the integral manifold in first-integral coordinates.

    Valid where p != q and p0 * q0 != 0.
    """
    p: float
    p0: float
    q: float
    q0: float
    v: float
    x1: float
    x2: float
    x3: float

    def __post_init__(self):
        if self.p == self.q:
            raise ChartError(f"p and q must differ, both are {self.p}")
        if self.p0 * self.q0 == 0:
            raise ChartError("p0 and q0 must be nonzero")

    @property
    def u(self) -> float:
        return -0.5 * self.p0 * self.q0 * (self.p - self.q)

    @property
    def x(self) -> np.ndarray:
        return np.array([self.x1, self.x2, self.x3])

    def as_array(self) -> np.ndarray:
        return np.array([self.p, self.p0, self.q, self.q0, self.v, self.x1, self.x2, self.x3])

    @classmethod
    def from_array(cls, values) -> 'PQPoint':
        return cls(*(float(x) for x in values))

    def to_dict(self) -> Dict:
        return {
            'p': self.p, 'p0': self.p0, 'q': self.q, 'q0': self.q0,
            'v': self.v, 'x1': self.x1, 'x2': self.x2, 'x3': self.x3
        }

    @classmethod
    def from_dict(cls, data: Dict) -> 'PQPoint':
        return cls(**data)


@dataclass(frozen=True)
class N2Point:
    """Point in the superposition coordinates (p, p0, q, q0, v, y1, y2, y3)"""
    p: float
    p0: float
    q: float
    q0: float
    v: float
    y1: float
    y2: float
    y3: float

    def __post_init__(self):
        if self.p == self.q:
            raise ChartError(f"p and q must differ, both are {self.p}")
        if self.p0 * self.q0 == 0:
            raise ChartError("p0 and q0 must be nonzero")

    @property
    def y(self) -> np.ndarray:
        return np.array([self.y1, self.y2, self.y3])

    def as_array(self) -> np.ndarray:
        return np.array([self.p, self.p0, self.q, self.q0, self.v, self.y1, self.y2, self.y3])

    @classmethod
    def from_array(cls, values) -> 'N2Point':
        return cls(*(float(x) for x in values))

    def to_dict(self) -> Dict:
        return {
            'p': self.p, 'p0': self.p0, 'q': self.q, 'q0': self.q0,
            'v': self.v, 'y1': self.y1, 'y2': self.y2, 'y3': self.y3
        }
