"""Catalog, integrability checks, the u^2 (dv^2 - du^2) embedding and verification"""

from .catalog import CATALOG_IDS, catalog, catalog_table, killing_field, list_cases, metric_by_name
from .coframe import coframe, gauss_curvature
from .darboux import check_integrability, classify, condition_residuals, curvature_jet, rotate_jet
from .errata import ERRATA_FLAGS, detect_errata, errata_details
from .so12 import first_integrals, g0_metric, phi, phi_inverse, psi, psi_inverse, so12_from_a, so12_from_pq
from .superposition import (
    GeneratorSurface,
    embed_from_generators,
    generator_mesh,
    singular_curve_from_generator,
    special_embedding,
    special_mesh,
    superpose,
)
from .verify import verify_embedding

__all__ = [
    'CATALOG_IDS', 'catalog', 'catalog_table', 'killing_field', 'list_cases', 'metric_by_name',
    'coframe', 'gauss_curvature',
    'check_integrability', 'classify', 'condition_residuals', 'curvature_jet', 'rotate_jet',
    'ERRATA_FLAGS', 'detect_errata', 'errata_details',
    'first_integrals', 'g0_metric', 'phi', 'phi_inverse', 'psi', 'psi_inverse', 'so12_from_a', 'so12_from_pq',
    'GeneratorSurface', 'embed_from_generators', 'generator_mesh', 'singular_curve_from_generator',
    'special_embedding', 'special_mesh', 'superpose',
    'verify_embedding'
]
