"""Normal forms of Darboux-integrable 2-metrics and a few reference metrics"""

import logging
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd

from ..errors import UnknownMetricError
from ..models.metric import (
    DarbouxType,
    KillingField,
    NormalFormCase,
    OrthogonalMetric2D,
    ProfileFamily,
    QProfile,
    SignatureClass,
    Smooth2D,
)
from ..numkit.functions import CatalogSmooth, ProductSmooth

logger = logging.getLogger(__name__)

V_DOMAIN = (0.0, 2 * np.pi)

# u-ranges per profile family; endpoints avoid the degenerate axis
FAMILY_DOMAINS = {
    ProfileFamily.COSH: (1e-3, 2.0),
    ProfileFamily.SINH: (0.1, 3.0),
    ProfileFamily.POWER: (0.1, 3.0),
    ProfileFamily.COS: (1e-3, np.pi / 2 - 1e-3),
}

# Coefficients (E, G) as (base name, exponent) pairs: E = base(u)^n
_FAMILY_COEFFS = {
    ProfileFamily.COSH: (('cosh', 2.0), ('sinh', 1.0)),
    ProfileFamily.SINH: (('sinh', 2.0), ('cosh', 1.0)),
    ProfileFamily.POWER: (('power', 1.0), ('power', 1.0)),
    ProfileFamily.COS: (('cos', 2.0), ('sin', 1.0)),
}

_FAMILY_CURVATURE: Dict[ProfileFamily, Callable] = {
    ProfileFamily.COSH: lambda u: np.cosh(u) ** -4,
    ProfileFamily.SINH: lambda u: np.sinh(u) ** -4,
    ProfileFamily.POWER: lambda u: np.asarray(u, dtype=float) ** -4,
    ProfileFamily.COS: lambda u: np.cos(u) ** -4,
}

# id: (family, sign_u, sign_v, sign of K, description)
_NORMAL_FORMS: Dict[str, Tuple[ProfileFamily, int, int, int, str]] = {
    'R1': (ProfileFamily.COSH, 1, 1, 1, "cosh^4 u du^2 + sinh^2 u dv^2"),
    'R2': (ProfileFamily.SINH, 1, 1, 1, "sinh^4 u du^2 + cosh^2 u dv^2"),
    'R3': (ProfileFamily.POWER, 1, 1, 1, "u^2 (du^2 + dv^2)"),
    'R4': (ProfileFamily.COS, 1, 1, -1, "cos^4 u du^2 + sin^2 u dv^2"),
    'LE-S1': (ProfileFamily.COSH, 1, -1, 1, "cosh^4 u du^2 - sinh^2 u dv^2"),
    'LE-S2': (ProfileFamily.SINH, 1, -1, 1, "sinh^4 u du^2 - cosh^2 u dv^2"),
    'LE-S3': (ProfileFamily.POWER, 1, -1, 1, "u^2 (du^2 - dv^2)"),
    'LE-T1': (ProfileFamily.COS, -1, 1, 1, "sin^2 u dv^2 - cos^4 u du^2"),
    'LH-S1': (ProfileFamily.COS, 1, -1, -1, "cos^4 u du^2 - sin^2 u dv^2"),
    'LH-T1': (ProfileFamily.COSH, -1, 1, -1, "sinh^2 u dv^2 - cosh^4 u du^2"),
    'LH-T2': (ProfileFamily.SINH, -1, 1, -1, "cosh^2 u dv^2 - sinh^4 u du^2"),
    'LH-T3': (ProfileFamily.POWER, -1, 1, -1, "u^2 (dv^2 - du^2)"),
}

CATALOG_IDS: Tuple[str, ...] = tuple(_NORMAL_FORMS)


def _smooth(name: str, exponent: float) -> Smooth2D:
    return Smooth2D(CatalogSmooth(name, exponent=exponent))


def _killing_type(signature: SignatureClass, sign_v: int) -> str:
    # timelike means positive squared length in the (+, -) convention
    if signature is SignatureClass.LORENTZIAN and sign_v > 0:
        return 'timelike'
    return 'spacelike'


def _build_case(case_id: str) -> NormalFormCase:
    family, sign_u, sign_v, k_sign, description = _NORMAL_FORMS[case_id]
    (e_name, e_exp), (g_name, g_exp) = _FAMILY_COEFFS[family]
    u_domain = FAMILY_DOMAINS[family]

    metric = OrthogonalMetric2D(
        E=_smooth(e_name, e_exp),
        G=_smooth(g_name, g_exp),
        sign_u=sign_u,
        sign_v=sign_v,
        domain=(u_domain, V_DOMAIN),
        name=case_id
    )
    signature = metric.signature_class
    killing_type = _killing_type(signature, sign_v)
    darboux_type = DarbouxType(k_sign)

    # q'' = 3 kappa q^(-1/3); kappa = eps for Riemannian and spacelike fields
    kappa = k_sign if killing_type == 'spacelike' else -k_sign
    profile = QProfile(family=family, kappa=kappa, u_domain=u_domain)

    base_curvature = _FAMILY_CURVATURE[family]
    return NormalFormCase(
        case_id=case_id,
        signature_class=signature,
        darboux_type=darboux_type,
        killing_type=killing_type,
        metric=metric,
        curvature=lambda u, f=base_curvature, k=k_sign: k * f(u),
        profile=profile,
        description=description
    )


_CASES: Dict[str, NormalFormCase] = {case_id: _build_case(case_id) for case_id in CATALOG_IDS}


def _reference_metrics() -> Dict[str, OrthogonalMetric2D]:
    one = CatalogSmooth('const')
    return {
        'sphere': OrthogonalMetric2D(
            Smooth2D(one), Smooth2D(CatalogSmooth('sin')),
            domain=((0.1, np.pi - 0.1), V_DOMAIN), name='sphere'
        ),
        'hyperbolic-plane': OrthogonalMetric2D(
            Smooth2D(one), Smooth2D(CatalogSmooth('sinh')),
            domain=((0.1, 3.0), V_DOMAIN), name='hyperbolic-plane'
        ),
        'flat': OrthogonalMetric2D(
            Smooth2D(one), Smooth2D(one),
            domain=((-1.0, 1.0), (-1.0, 1.0)), name='flat'
        ),
        'flat-lorentz': OrthogonalMetric2D(
            Smooth2D(one), Smooth2D(one), sign_v=-1,
            domain=((-1.0, 1.0), (-1.0, 1.0)), name='flat-lorentz'
        ),
        'de-sitter': OrthogonalMetric2D(
            Smooth2D(one), Smooth2D(CatalogSmooth('cosh')), sign_v=-1,
            domain=((-1.0, 1.0), V_DOMAIN), name='de-sitter'
        ),
        # E^2 = cosh^4 u (1 + 0.1 u): breaks the integrability conditions
        'perturbed-R1': OrthogonalMetric2D(
            Smooth2D(ProductSmooth((
                CatalogSmooth('cosh', exponent=2.0),
                CatalogSmooth('power', scale=0.1, offset=1.0, exponent=0.5)
            ))),
            Smooth2D(CatalogSmooth('sinh')),
            domain=(FAMILY_DOMAINS[ProfileFamily.COSH], V_DOMAIN), name='perturbed-R1'
        ),
    }


_REFERENCE = _reference_metrics()

# Constant curvature of the reference metrics where it is known in closed form
REFERENCE_CURVATURE = {
    'sphere': 1.0,
    'hyperbolic-plane': -1.0,
    'flat': 0.0,
    'flat-lorentz': 0.0,
    'de-sitter': -1.0,
}


def catalog(case_id: str) -> NormalFormCase:
    """
    Look up a normal form by id.

    Args:
        case_id: One of R1..R4, LE-S1..LE-S3, LE-T1, LH-S1, LH-T1..LH-T3

    Returns:
        NormalFormCase with metric, closed-form curvature and profile

    Raises:
        UnknownMetricError: If the id is not in the catalog
    """
    if case_id not in _CASES:
        raise UnknownMetricError(f"Normal form {case_id} not found")
    return _CASES[case_id]


def list_cases() -> List[NormalFormCase]:
    return [_CASES[case_id] for case_id in CATALOG_IDS]


def reference_metric(name: str) -> OrthogonalMetric2D:
    if name not in _REFERENCE:
        raise UnknownMetricError(f"Reference metric {name} not found")
    return _REFERENCE[name]


def known_metric_names() -> List[str]:
    return list(CATALOG_IDS) + list(_REFERENCE)


def metric_by_name(name: str) -> OrthogonalMetric2D:
    """Resolve a catalog id or a reference metric name"""
    if name in _CASES:
        return _CASES[name].metric
    if name in _REFERENCE:
        return _REFERENCE[name]
    raise UnknownMetricError(
        f"Metric {name} not found; known: {', '.join(known_metric_names())}"
    )


def killing_field(name: str) -> Optional[KillingField]:
    """
    Canonical Killing field d/dv of a normal form.

    Reference metrics are not members of the catalog and return None.

    Raises:
        UnknownMetricError: For names that are neither
    """
    if name in _REFERENCE:
        return None
    case = catalog(name)
    metric = case.metric
    return KillingField(
        metric_id=name,
        causal_type=case.killing_type,
        sign=metric.sign_v,
        G=lambda u, m=metric: m.G(u, 0.0)
    )


def lie_derivative_residual(metric: OrthogonalMetric2D, us: Sequence[float],
                            vs: Sequence[float]) -> float:
    """
    Max |L_{d/dv} g| over samples.

    For g = sign_u E^2 du^2 + sign_v G^2 dv^2 the Lie derivative along d/dv
    is the v-derivative of the coefficients.
    """
    U, V = np.meshgrid(np.asarray(us, dtype=float), np.asarray(vs, dtype=float), indexing='ij')
    d_guu = 2 * metric.E(U, V) * metric.E.partial(U, V, 0, 1)
    d_gvv = 2 * metric.G(U, V) * metric.G.partial(U, V, 0, 1)
    return float(max(np.max(np.abs(d_guu)), np.max(np.abs(d_gvv))))


def catalog_table():
    """Summary of the catalog as a pandas DataFrame"""
    rows = []
    for case in list_cases():
        rows.append({
            'id': case.case_id,
            'signature': case.signature_class.value,
            'type': case.darboux_type.name.lower(),
            'killing': case.killing_type,
            'metric': case.description,
            'u_min': case.metric.domain[0][0],
            'u_max': case.metric.domain[0][1],
            'C': case.profile.first_integral_constant
        })
    return pd.DataFrame(rows)
