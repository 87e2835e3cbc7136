"""Data models for metrics, charts, curves, meshes and reports"""

from .charts import ACoords, N2Point, PQPoint
from .curves import GeneratorPair, InitialCurve, LiftState, SingularCurve
from .mesh import SurfaceEvaluator, SurfaceMesh
from .metric import (
    CurvatureJet,
    DarbouxType,
    KillingField,
    NormalFormCase,
    OrthogonalMetric2D,
    ProfileFamily,
    QProfile,
    SignatureClass,
    Smooth2D,
)
from .report import SCHEMA_VERSION, DarbouxReport, Report, RunConfig

__all__ = [
    'ACoords', 'N2Point', 'PQPoint',
    'GeneratorPair', 'InitialCurve', 'LiftState', 'SingularCurve',
    'SurfaceEvaluator', 'SurfaceMesh',
    'CurvatureJet', 'DarbouxType', 'KillingField', 'NormalFormCase', 'OrthogonalMetric2D',
    'ProfileFamily', 'QProfile', 'SignatureClass', 'Smooth2D',
    'SCHEMA_VERSION', 'DarbouxReport', 'Report', 'RunConfig'
]
