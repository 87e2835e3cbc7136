"""Multi-stage pipelines: geometric Cauchy problem and extrinsic-symmetry sweeps"""

from .cauchy import CauchySolution, LiftMethod, lift, solve, split
from .parallel import map_grid
from .revolve import AmbientKilling, ExtrinsicParams, integrate_profile, killing_predicate, revolve, sweep

__all__ = [
    'CauchySolution', 'LiftMethod', 'lift', 'solve', 'split',
    'map_grid',
    'AmbientKilling', 'ExtrinsicParams', 'integrate_profile', 'killing_predicate', 'revolve', 'sweep'
]
