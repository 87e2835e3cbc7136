"""Numerical primitives: smooth functions, differentiation, integration, inner products"""

from .differentiate import (
    grid_first_partials,
    grid_second_partials,
    num_gradient,
    num_hessian,
    num_jacobian,
)
from .functions import (
    CatalogSmooth,
    NumericSmooth,
    Poly1D,
    PolySmooth,
    ProductSmooth,
    Smooth1D,
    poly,
    smooth_from_dict,
)
from .integrate import (
    OdeConfig,
    OdeMethod,
    QuadConfig,
    Trajectory,
    TwoSidedTrajectory,
    integrate,
    ode_solve,
    ode_solve_both_ways,
)
from .linalg import Signature, gram, group_defect, is_proper_orthochronous, unit

__all__ = [
    'CatalogSmooth', 'NumericSmooth', 'Poly1D', 'PolySmooth', 'ProductSmooth', 'Smooth1D',
    'poly', 'smooth_from_dict',
    'OdeConfig', 'OdeMethod', 'QuadConfig', 'Trajectory', 'TwoSidedTrajectory', 'integrate',
    'ode_solve', 'ode_solve_both_ways',
    'grid_first_partials', 'grid_second_partials', 'num_gradient', 'num_hessian', 'num_jacobian',
    'Signature', 'gram', 'group_defect', 'is_proper_orthochronous', 'unit'
]
