"""One-variable functions with derivatives up to third order"""

from abc import ABC, abstractmethod
from dataclasses import dataclass, field
from math import comb
from typing import Callable, Dict, Optional, Sequence, Tuple

import numpy as np
from numpy.polynomial import polynomial as P
from scipy.interpolate import CubicSpline

from ..errors import InputFormatError

MAX_ORDER = 3

# Central-difference steps by derivative order, scaled by max(1, |t|)
NUMERIC_STEPS = {1: 1e-5, 2: 1e-4, 3: 1e-3}


@dataclass(frozen=True)
class Poly1D:
    """Real polynomial, coefficients in ascending degree"""
    coeffs: Tuple[float, ...] = (0.0,)

    def __post_init__(self):
        coeffs = tuple(float(c) for c in np.atleast_1d(self.coeffs))
        if not coeffs:
            coeffs = (0.0,)
        object.__setattr__(self, 'coeffs', coeffs)

    @property
    def degree(self) -> int:
        nonzero = [i for i, c in enumerate(self.coeffs) if c != 0.0]
        return nonzero[-1] if nonzero else 0

    def __call__(self, t):
        return P.polyval(t, self.coeffs)

    def deriv(self, m: int = 1) -> 'Poly1D':
        """Exact m-th derivative"""
        if m == 0:
            return self
        if len(self.coeffs) <= m:
            return Poly1D((0.0,))
        return Poly1D(tuple(P.polyder(self.coeffs, m)))

    def integ(self, m: int = 1, lbnd: float = 0.0) -> 'Poly1D':
        """Antiderivative vanishing at lbnd"""
        return Poly1D(tuple(P.polyint(self.coeffs, m, lbnd=lbnd)))

    def to_dict(self) -> Dict:
        """Convert to dictionary"""
        return {'poly': list(self.coeffs)}

    @classmethod
    def from_dict(cls, data: Dict) -> 'Poly1D':
        """Create from dictionary"""
        return cls(tuple(data['poly']))


class Smooth1D(ABC):
    """
    Function of one variable exposing value and derivatives up to order 3.
    Polynomial and catalog variants differentiate in closed form; the numeric
    variant falls back to central differences.
    """

    @abstractmethod
    def derivative(self, t, order: int = 1):
        """Derivative of the given order (0..3) at t (scalar or array)"""

    def __call__(self, t):
        return self.derivative(t, 0)

    def value(self, t):
        return self.derivative(t, 0)

    @abstractmethod
    def to_dict(self) -> Dict:
        """JSON-compatible description"""


@dataclass(frozen=True)
class PolySmooth(Smooth1D):
    poly: Poly1D

    def derivative(self, t, order: int = 1):
        return self.poly.deriv(order)(t)

    def to_dict(self) -> Dict:
        return self.poly.to_dict()


def _base_derivative(name: str, x, k: int):
    """k-th derivative of the named base function at x"""
    if name == 'sin':
        return np.sin(x + k * np.pi / 2)
    if name == 'cos':
        return np.cos(x + k * np.pi / 2)
    if name == 'sinh':
        return np.sinh(x) if k % 2 == 0 else np.cosh(x)
    if name == 'cosh':
        return np.cosh(x) if k % 2 == 0 else np.sinh(x)
    if name == 'exp':
        return np.exp(x)
    if name == 'const':
        return np.ones_like(np.asarray(x, dtype=float)) if k == 0 else np.zeros_like(np.asarray(x, dtype=float))
    if name == 'power':
        if k == 0:
            return np.asarray(x, dtype=float)
        if k == 1:
            return np.ones_like(np.asarray(x, dtype=float))
        return np.zeros_like(np.asarray(x, dtype=float))
    raise InputFormatError(f"Unknown catalog function {name!r}")


CATALOG_FUNCTIONS = ('sin', 'cos', 'sinh', 'cosh', 'exp', 'power', 'const')


@dataclass(frozen=True)
class CatalogSmooth(Smooth1D):
    """
    amplitude * base(scale * t + offset) ** exponent for a named base
    function; 'power' uses the identity as base so it covers (k t + c)^n.
    """
    name: str
    amplitude: float = 1.0
    scale: float = 1.0
    offset: float = 0.0
    exponent: float = 1.0

    def __post_init__(self):
        if self.name not in CATALOG_FUNCTIONS:
            raise InputFormatError(
                f"Unknown catalog function {self.name!r}; expected one of {CATALOG_FUNCTIONS}"
            )

    def derivative(self, t, order: int = 1):
        if order < 0 or order > MAX_ORDER:
            raise ValueError(f"Derivative order {order} outside 0..{MAX_ORDER}")
        x = self.scale * np.asarray(t, dtype=float) + self.offset
        g = [_base_derivative(self.name, x, k) for k in range(order + 1)]
        n = self.exponent

        def gp(power):
            if power == 0:
                return np.ones_like(g[0])
            return g[0] ** power

        # Faa di Bruno for g(x)**n up to third order
        if order == 0:
            out = gp(n)
        elif order == 1:
            out = n * gp(n - 1) * g[1]
        elif order == 2:
            out = n * gp(n - 1) * g[2]
            if n * (n - 1) != 0:
                out = out + n * (n - 1) * gp(n - 2) * g[1] ** 2
        else:
            out = n * gp(n - 1) * g[3]
            if n * (n - 1) != 0:
                out = out + 3 * n * (n - 1) * gp(n - 2) * g[1] * g[2]
            if n * (n - 1) * (n - 2) != 0:
                out = out + n * (n - 1) * (n - 2) * gp(n - 3) * g[1] ** 3
        return self.amplitude * self.scale ** order * out

    def to_dict(self) -> Dict:
        return {
            'name': self.name,
            'amplitude': self.amplitude,
            'scale': self.scale,
            'offset': self.offset,
            'exponent': self.exponent
        }


@dataclass(frozen=True)
class ProductSmooth(Smooth1D):
    """Product of factors, differentiated with the Leibniz rule"""
    factors: Tuple[Smooth1D, ...]

    def derivative(self, t, order: int = 1):
        if not self.factors:
            return np.ones_like(np.asarray(t, dtype=float))
        head = self.factors[0]
        if len(self.factors) == 1:
            return head.derivative(t, order)
        rest = ProductSmooth(self.factors[1:])
        return sum(
            comb(order, j) * head.derivative(t, j) * rest.derivative(t, order - j)
            for j in range(order + 1)
        )

    def to_dict(self) -> Dict:
        return {'product': [f.to_dict() for f in self.factors]}


@dataclass(frozen=True)
class NumericSmooth(Smooth1D):
    """Arbitrary callable differentiated by central differences"""
    func: Callable = field(compare=False)
    table: Optional[Tuple[Tuple[float, ...], Tuple[float, ...]]] = None

    @classmethod
    def from_table(cls, ts: Sequence[float], ys: Sequence[float]) -> 'NumericSmooth':
        """Interpolate samples with a cubic spline"""
        ts = np.asarray(ts, dtype=float)
        ys = np.asarray(ys, dtype=float)
        if ts.ndim != 1 or ts.shape != ys.shape or len(ts) < 4:
            raise InputFormatError("Numeric table needs matching t/y arrays with at least 4 samples")
        spline = CubicSpline(ts, ys)
        return cls(func=spline, table=(tuple(ts), tuple(ys)))

    def derivative(self, t, order: int = 1):
        t = np.asarray(t, dtype=float)
        f = self.func
        if order == 0:
            return np.asarray(f(t), dtype=float)
        h = NUMERIC_STEPS[order] * np.maximum(1.0, np.abs(t))
        if order == 1:
            return (f(t + h) - f(t - h)) / (2 * h)
        if order == 2:
            return (f(t + h) - 2 * f(t) + f(t - h)) / h ** 2
        if order == 3:
            return (f(t + 2 * h) - 2 * f(t + h) + 2 * f(t - h) - f(t - 2 * h)) / (2 * h ** 3)
        raise ValueError(f"Derivative order {order} outside 0..{MAX_ORDER}")

    def to_dict(self) -> Dict:
        if self.table is None:
            raise InputFormatError("Callable-backed numeric function has no JSON form")
        return {'table': {'t': list(self.table[0]), 'y': list(self.table[1])}}


def poly(*coeffs: float) -> PolySmooth:
    """Shorthand for a polynomial Smooth1D"""
    return PolySmooth(Poly1D(tuple(coeffs)))


def smooth_from_dict(data) -> Smooth1D:
    """
    Parse a Smooth1D from JSON.

    Accepted forms: a bare coefficient list, {"poly": [...]},
    {"name": "cosh", "exponent": 2, ...}, {"product": [item, ...]},
    {"table": {"t": [...], "y": [...]}}.
    """
    if isinstance(data, (list, tuple)):
        return PolySmooth(Poly1D(tuple(data)))
    if isinstance(data, (int, float)):
        return PolySmooth(Poly1D((float(data),)))
    if not isinstance(data, dict):
        raise InputFormatError(f"Cannot parse function from {data!r}")
    try:
        if 'poly' in data:
            return PolySmooth(Poly1D.from_dict(data))
        if 'product' in data:
            return ProductSmooth(tuple(smooth_from_dict(d) for d in data['product']))
        if 'table' in data:
            return NumericSmooth.from_table(data['table']['t'], data['table']['y'])
        if 'name' in data:
            return CatalogSmooth(
                name=data['name'],
                amplitude=float(data.get('amplitude', 1.0)),
                scale=float(data.get('scale', 1.0)),
                offset=float(data.get('offset', 0.0)),
                exponent=float(data.get('exponent', 1.0))
            )
    except (KeyError, TypeError) as e:
        raise InputFormatError(f"Malformed function record {data!r}: {e}") from e
    raise InputFormatError(f"Unrecognised function record {data!r}")


def sample_min(func: Callable, lo: float, hi: float, n: int = 2001) -> float:
    """Minimum of func over a dense uniform sample of [lo, hi]"""
    ts = np.linspace(lo, hi, n)
    return float(np.min(func(ts)))
