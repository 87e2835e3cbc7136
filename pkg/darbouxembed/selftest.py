"""Randomised property battery behind the `selftest` command"""

import logging
from typing import Callable, Dict, Tuple

import numpy as np

from .geometry.catalog import CATALOG_IDS, catalog, metric_by_name
from .geometry.coframe import gauss_curvature
from .geometry.darboux import check_integrability
from .geometry.so12 import first_integrals, phi, phi_inverse, psi, psi_inverse, so12_from_a, so12_from_pq
from .geometry.superposition import constant_generator_pq, embed_from_generators, special_embedding
from .models.charts import ACoords
from .models.curves import GeneratorPair, InitialCurve
from .numkit.linalg import Signature, group_defect

logger = logging.getLogger(__name__)

# check name -> tolerance
TOLERANCES: Dict[str, float] = {
    'so12_membership': 1e-10,
    'chart_consistency': 1e-10,
    'phi_psi_roundtrip': 1e-12,
    'catalog_curvature': 1e-5,
    'catalog_integrability': 1e-4,
    'constant_generators': 1e-9,
    'cauchy_diagonal': 1e-6,
}


def _random_acoords(rng: np.random.Generator) -> ACoords:
    return ACoords(float(rng.uniform(0.2, 3.0)), float(rng.uniform(-2, 2)), float(rng.uniform(-2, 2)))


def so12_membership(rng: np.random.Generator, samples: int) -> float:
    worst = 0.0
    for _ in range(samples):
        orth, det = group_defect(so12_from_a(_random_acoords(rng)), Signature.LORENTZ)
        worst = max(worst, orth, det)
    return worst


def chart_consistency(rng: np.random.Generator, samples: int) -> float:
    worst = 0.0
    for _ in range(samples):
        a = _random_acoords(rng)
        if abs(a.a1 - abs(a.a2)) < 1e-2:
            continue
        p, p0, q, q0 = first_integrals(float(rng.uniform(0.1, 2.0)), a)
        worst = max(worst, float(np.max(np.abs(so12_from_pq(p, q, p0, q0) - so12_from_a(a)))))
    return worst


def phi_psi_roundtrip(rng: np.random.Generator, samples: int) -> float:
    worst = 0.0
    for _ in range(samples):
        a = ACoords(float(rng.uniform(0.5, 2.0)), float(rng.uniform(-0.4, 0.4)), float(rng.uniform(-1, 1)))
        u, v = float(rng.uniform(0.2, 2.0)), float(rng.uniform(-1, 1))
        x = rng.uniform(-1, 1, 3)
        point = phi(u, v, a, x)
        u2, v2, a2, x2 = phi_inverse(point)
        back = psi_inverse(psi(point))
        worst = max(worst, abs(u2 - u), abs(v2 - v),
                    float(np.max(np.abs(a2.as_array() - a.as_array()))),
                    float(np.max(np.abs(x2 - x))),
                    float(np.max(np.abs(back.as_array() - point.as_array()))))
    return worst


def catalog_curvature(rng: np.random.Generator, samples: int) -> float:
    """Relative error of the numeric Gauss curvature against the closed forms"""
    worst = 0.0
    for case_id in CATALOG_IDS:
        case = catalog(case_id)
        (u_lo, u_hi), (v_lo, v_hi) = case.metric.domain
        pad = 0.05 * (u_hi - u_lo)
        us = rng.uniform(u_lo + pad, u_hi - pad, samples)
        vs = rng.uniform(v_lo, v_hi, samples)
        numeric = gauss_curvature(case.metric, us, vs)
        exact = case.curvature(us)
        worst = max(worst, float(np.max(np.abs(numeric - exact) / np.abs(exact))))
    return worst


def catalog_integrability(rng: np.random.Generator, samples: int) -> float:
    """Worst max residual over the catalog; reference metrics must fail"""
    worst = max(check_integrability(catalog(c).metric, grid=(6, 6)).max_residual for c in CATALOG_IDS)
    for name in ('sphere', 'hyperbolic-plane', 'perturbed-R1'):
        if check_integrability(metric_by_name(name), grid=(6, 6)).verdict:
            logger.error(f"Reference metric {name} passed the integrability check")
            return float('inf')
    return worst


def constant_generators(rng: np.random.Generator, samples: int) -> float:
    worst = 0.0
    for eps1, eps2 in ((1.0, 2.0), (1.0, 4.0), (2.0, 3.0)):
        pair = GeneratorPair.constant(eps1, eps2, p_domain=(-50.0, 50.0), q_domain=(-50.0, 50.0))
        u = rng.uniform(0.2, 1.0, samples)
        v = rng.uniform(-1.0, 1.0, samples)
        p, q = constant_generator_pq(eps1, eps2, u, v)
        x, _ = embed_from_generators(pair, p, q)
        worst = max(worst, float(np.max(np.abs(x - special_embedding(eps1, eps2, u, v)))))
    return worst


def cauchy_diagonal(rng: np.random.Generator, samples: int) -> float:
    from .processor.cauchy import solve

    solution = solve(InitialCurve.example2(), r0=1.0, grid=(11, 11), t_range=(0.8, 1.2), verify=False)
    return float(solution.diagnostics['diagonal_error'])


CHECKS: Dict[str, Callable[[np.random.Generator, int], float]] = {
    'so12_membership': so12_membership,
    'chart_consistency': chart_consistency,
    'phi_psi_roundtrip': phi_psi_roundtrip,
    'catalog_curvature': catalog_curvature,
    'catalog_integrability': catalog_integrability,
    'constant_generators': constant_generators,
    'cauchy_diagonal': cauchy_diagonal,
}


def run_selftest(seed: int = 0, samples: int = 100) -> Tuple[bool, Dict[str, Dict]]:
    """
    Run every check with one seeded generator.

    Returns:
        (all passed, {check: {error, tolerance, passed}})
    """
    rng = np.random.default_rng(seed)
    results = {}
    for name, check in CHECKS.items():
        error = check(rng, samples)
        passed = bool(error < TOLERANCES[name])
        results[name] = {'error': error, 'tolerance': TOLERANCES[name], 'passed': passed}
        log = logger.info if passed else logger.warning
        log(f"selftest {name}: error {error:.3e} ({'pass' if passed else 'FAIL'})")
    return all(r['passed'] for r in results.values()), results
