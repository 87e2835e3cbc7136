"""Reproducible mismatches between printed closed forms and the verified constructions"""

import logging
from functools import lru_cache
from typing import Dict, Optional

import numpy as np

from ..errors import DarbouxEmbedError
from ..models.curves import GeneratorPair
from ..numkit.functions import poly
from .superposition import (
    GeneratorSurface,
    embed_from_generators,
    printed_constant_generator_embedding,
    printed_uv_from_generators,
)

logger = logging.getLogger(__name__)

ERRATA_FLAGS = ('pq_to_uv_factor', 'iota0_x1_x2_mismatch', 'ode_sys_sign')

MISMATCH_TOL = 1e-6
LIFT_ERROR_THRESHOLD = 0.1


def pq_to_uv_factor() -> Dict[str, float]:
    """u from the printed (F''' G''')^(1/4) factor against u from p0 q0 / 2, at F = p^3/48, G = q^3/3"""
    pair = GeneratorPair(poly(0, 0, 0, 1 / 48), poly(0, 0, 0, 1 / 3))
    p, q = np.array(0.0), np.array(1.0)
    ours = float(GeneratorSurface(pair).u(p, q))
    printed = float(printed_uv_from_generators(pair, p, q))
    return {'u': ours, 'u_printed': printed, 'ratio': ours / printed}


def iota0_mismatch(eps1: float = 1.0, eps2: float = 2.0) -> Dict[str, float]:
    """x1 of the termwise constant-generator formula against the superposition, at (p, q) = (0, 1)"""
    x, _ = embed_from_generators(GeneratorPair.constant(eps1, eps2), np.array(0.0), np.array(1.0))
    printed = printed_constant_generator_embedding(eps1, eps2, 0.0, 1.0)
    return {
        'x1': float(x[0]),
        'x1_printed': float(printed[0]),
        'x2': float(x[1]),
        'x2_printed': float(printed[1]),
    }


def ode_sys_sign(samples: int = 41) -> Dict[str, Optional[float]]:
    """
    Lift error of the verbatim closed-form lift ODE on the reference curve,
    against its known lift r = t, s = 3/(2t), v = 3t/2 on [0.8, 1.2]. None marks
    a lift that broke down.
    """
    from ..models.curves import InitialCurve
    from ..processor.cauchy import LiftMethod, lift

    curve = InitialCurve.example2()
    ts = np.linspace(0.8, 1.2, samples)
    expected = np.stack([ts, 1.5 / ts, 1.5 * ts])
    errors = {}
    for method in (LiftMethod.PRINTED, LiftMethod.VERBATIM):
        try:
            lifted = lift(curve, r0=1.0, method=method, t_range=(0.8, 1.2))
            errors[method.value] = float(np.max(np.abs(lifted.state(ts) - expected)))
        except DarbouxEmbedError as e:
            logger.info(f"{method.value} lift broke down: {e}")
            errors[method.value] = None
    return {'printed_error': errors['printed'], 'verbatim_error': errors['verbatim']}


@lru_cache(maxsize=1)
def _detect() -> Dict[str, Dict]:
    uv = pq_to_uv_factor()
    iota = iota0_mismatch()
    ode = ode_sys_sign()
    return {
        'pq_to_uv_factor': {'flag': abs(uv['ratio'] - 1) > MISMATCH_TOL, **uv},
        'iota0_x1_x2_mismatch': {
            'flag': max(abs(iota['x1'] - iota['x1_printed']), abs(iota['x2'] - iota['x2_printed'])) > MISMATCH_TOL,
            **iota
        },
        'ode_sys_sign': {'flag': ode['verbatim_error'] is None or ode['verbatim_error'] > LIFT_ERROR_THRESHOLD, **ode},
    }


def detect_errata() -> Dict[str, bool]:
    """Every errata flag, always present"""
    return {name: bool(entry['flag']) for name, entry in _detect().items()}


def errata_details() -> Dict[str, Dict]:
    """Flags together with the values they were decided on"""
    return {name: dict(entry) for name, entry in _detect().items()}
