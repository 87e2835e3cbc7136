"""Finite-difference Jacobians and Hessians, pointwise and over whole grids"""

from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from ..errors import DomainError

FIRST_STEP = 1e-5
SECOND_STEP = 1e-3

# Fourth-order first-derivative weights at offsets -2, -1, 1, 2 (divide by 12h)
_D1_WEIGHTS = ((-2, 1.0), (-1, -8.0), (1, 8.0), (2, -1.0))


def _steps(x: np.ndarray, base: float, h) -> np.ndarray:
    if h is None:
        return base * np.maximum(1.0, np.abs(x))
    return np.broadcast_to(np.asarray(h, dtype=float), np.shape(x)).copy()


def _check_bounds(x: np.ndarray, reach: np.ndarray,
                  bounds: Optional[Sequence[Tuple[float, float]]]):
    if bounds is None:
        return
    for j, (lo, hi) in enumerate(bounds):
        if x[j] - reach[j] < lo or x[j] + reach[j] > hi:
            raise DomainError(
                f"Stencil around x[{j}]={x[j]:.6g} leaves the domain [{lo}, {hi}]"
            )


def num_jacobian(fn: Callable, at: Sequence[float], h=None,
                 bounds: Optional[Sequence[Tuple[float, float]]] = None) -> np.ndarray:
    """
    Central-difference Jacobian of a vector map.

    Args:
        fn: Map R^n -> R^m
        at: Evaluation point
        h: Step (scalar or per component); defaults to 1e-5 * max(1, |x|)
        bounds: Optional per-component (lo, hi); stencils leaving it raise

    Returns:
        Array of shape (m, n)
    """
    x = np.asarray(at, dtype=float)
    steps = _steps(x, FIRST_STEP, h)
    _check_bounds(x, steps, bounds)

    columns = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = steps[j]
        columns.append((np.atleast_1d(fn(x + e)) - np.atleast_1d(fn(x - e))) / (2 * steps[j]))
    return np.stack(columns, axis=-1)


def num_gradient(fn: Callable, at: Sequence[float], h=None) -> np.ndarray:
    """Fourth-order gradient of a scalar (or vector) map, shape (m, n)"""
    x = np.asarray(at, dtype=float)
    steps = _steps(x, SECOND_STEP, h)

    columns = []
    for j in range(x.size):
        e = np.zeros_like(x)
        e[j] = steps[j]
        total = sum(w * np.atleast_1d(fn(x + k * e)) for k, w in _D1_WEIGHTS)
        columns.append(total / (12 * steps[j]))
    return np.stack(columns, axis=-1)


def num_hessian(fn: Callable, at: Sequence[float], h=None,
                bounds: Optional[Sequence[Tuple[float, float]]] = None) -> np.ndarray:
    """
    Hessian by fourth-order stencils.

    Args:
        fn: Map R^n -> R^m
        at: Evaluation point
        h: Step; defaults to 1e-3 * max(1, |x|)
        bounds: Optional per-component domain

    Returns:
        Array of shape (m, n, n)
    """
    x = np.asarray(at, dtype=float)
    steps = _steps(x, SECOND_STEP, h)
    _check_bounds(x, 2 * steps, bounds)

    n = x.size
    f0 = np.atleast_1d(fn(x))
    out = np.zeros(f0.shape + (n, n))

    for i in range(n):
        ei = np.zeros_like(x)
        ei[i] = steps[i]
        diag = (-np.atleast_1d(fn(x + 2 * ei)) + 16 * np.atleast_1d(fn(x + ei)) - 30 * f0
                + 16 * np.atleast_1d(fn(x - ei)) - np.atleast_1d(fn(x - 2 * ei)))
        out[..., i, i] = diag / (12 * steps[i] ** 2)

        for j in range(i + 1, n):
            ej = np.zeros_like(x)
            ej[j] = steps[j]
            total = 0.0
            for a, wa in _D1_WEIGHTS:
                for b, wb in _D1_WEIGHTS:
                    total = total + wa * wb * np.atleast_1d(fn(x + a * ei + b * ej))
            mixed = total / (144 * steps[i] * steps[j])
            out[..., i, j] = mixed
            out[..., j, i] = mixed
    return out


def grid_first_partials(fn: Callable, A: np.ndarray, B: np.ndarray, h=None
                        ) -> Tuple[np.ndarray, np.ndarray]:
    """
    Central first partials of fn(A, B) over a whole grid.

    fn must be vectorised: fn(A, B) returns an array with A.shape leading axes.
    """
    ha = _steps(A, FIRST_STEP, h)
    hb = _steps(B, FIRST_STEP, h)
    extra = np.ndim(fn(A[:1, :1], B[:1, :1])) - 2
    ha_b = ha.reshape(ha.shape + (1,) * extra)
    hb_b = hb.reshape(hb.shape + (1,) * extra)
    fa = (fn(A + ha, B) - fn(A - ha, B)) / (2 * ha_b)
    fb = (fn(A, B + hb) - fn(A, B - hb)) / (2 * hb_b)
    return fa, fb


def grid_second_partials(fn: Callable, A: np.ndarray, B: np.ndarray, h=None
                         ) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fourth-order second partials (faa, fab, fbb) of fn(A, B) over a grid"""
    ha = _steps(A, SECOND_STEP, h)
    hb = _steps(B, SECOND_STEP, h)
    f0 = fn(A, B)
    extra = np.ndim(f0) - 2
    ha_b = ha.reshape(ha.shape + (1,) * extra)
    hb_b = hb.reshape(hb.shape + (1,) * extra)

    faa = (-fn(A + 2 * ha, B) + 16 * fn(A + ha, B) - 30 * f0
           + 16 * fn(A - ha, B) - fn(A - 2 * ha, B)) / (12 * ha_b ** 2)
    fbb = (-fn(A, B + 2 * hb) + 16 * fn(A, B + hb) - 30 * f0
           + 16 * fn(A, B - hb) - fn(A, B - 2 * hb)) / (12 * hb_b ** 2)

    total = 0.0
    for a, wa in _D1_WEIGHTS:
        for b, wb in _D1_WEIGHTS:
            total = total + wa * wb * fn(A + a * ha, B + b * hb)
    fab = total / (144 * ha_b * hb_b)
    return faa, fab, fbb
