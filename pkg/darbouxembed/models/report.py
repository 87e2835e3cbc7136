"""Result and run-report models"""

from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

SCHEMA_VERSION = "1.0"


def channel_summary(values) -> Dict[str, Optional[float]]:
    """max and mean of |values|, ignoring NaN"""
    arr = np.abs(np.asarray(values, dtype=float))
    finite = arr[np.isfinite(arr)]
    if finite.size == 0:
        return {'max': None, 'mean': None}
    return {'max': float(finite.max()), 'mean': float(finite.mean())}


@dataclass
class DarbouxReport:
    """Outcome of an integrability check over a sample grid"""
    metric_name: str
    epsilon: int  # +1 elliptic, -1 hyperbolic
    sigma: int  # +1 Riemannian, -1 Lorentzian
    grid_u: np.ndarray
    grid_v: np.ndarray
    residuals: Dict[str, np.ndarray]  # channel -> (n_u, n_v) array
    tolerance: float
    form: str = 'q'

    @property
    def max_residual(self) -> float:
        return max(float(np.max(np.abs(r))) for r in self.residuals.values())

    @property
    def verdict(self) -> bool:
        return self.max_residual < self.tolerance

    def summary(self) -> Dict[str, Dict[str, Optional[float]]]:
        return {name: channel_summary(r) for name, r in self.residuals.items()}

    def to_dict(self) -> Dict:
        """Convert to dictionary (per-channel summaries, not raw samples)"""
        return {
            'metric': self.metric_name,
            'epsilon': self.epsilon,
            'type': 'elliptic' if self.epsilon > 0 else 'hyperbolic',
            'signature': 'riemannian' if self.sigma > 0 else 'lorentzian',
            'form': self.form,
            'grid': [int(len(self.grid_u)), int(len(self.grid_v))],
            'u_range': [float(self.grid_u[0]), float(self.grid_u[-1])],
            'v_range': [float(self.grid_v[0]), float(self.grid_v[-1])],
            'residuals': self.summary(),
            'max_residual': self.max_residual,
            'tolerance': self.tolerance,
            'verdict': self.verdict
        }


@dataclass
class RunConfig:
    """Validated options of one CLI invocation"""
    command: str
    options: Dict = field(default_factory=dict)
    grid: Tuple[int, int] = (50, 50)
    tolerance: float = 1e-6
    outputs: List[str] = field(default_factory=list)

    def __post_init__(self):
        if len(self.grid) != 2 or min(self.grid) < 2:
            raise ValueError(f"Grid must be two sizes of at least 2, got {self.grid}")
        if self.tolerance <= 0:
            raise ValueError("Tolerance must be positive")

    def to_dict(self) -> Dict:
        return {
            'command': self.command,
            'options': self.options,
            'grid': list(self.grid),
            'tolerance': self.tolerance,
            'outputs': self.outputs
        }


@dataclass
class Report:
    """Machine-readable summary written next to every run"""
    command: str
    config: RunConfig
    tolerances: Dict[str, float]
    residuals: Dict[str, Dict[str, Optional[float]]]
    verdict: bool
    errata: Dict[str, bool] = field(default_factory=dict)
    details: Dict = field(default_factory=dict)
    timing: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        """Convert to dictionary"""
        return {
            'schema_version': SCHEMA_VERSION,
            'command': self.command,
            'config': self.config.to_dict(),
            'tolerances': self.tolerances,
            'residuals': self.residuals,
            'verdict': self.verdict,
            'errata': self.errata,
            'details': self.details,
            'timing': self.timing
        }

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict else 2
