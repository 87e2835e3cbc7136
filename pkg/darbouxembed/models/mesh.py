"""Surface meshes with the exact maps that produced them"""

from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

import numpy as np

from ..numkit.linalg import Signature
from .report import channel_summary


@dataclass
class SurfaceEvaluator:
    """
    Vectorised callables over parameter grids (A, B of equal shape).

    point(A, B)  -> (..., 3) position in flat 3-space
    chart(A, B)  -> (..., 2) metric coordinates (u, v)
    chart_jacobian(A, B) -> (..., 2, 2) [[u_a, u_b], [v_a, v_b]]
    frame(A, B)  -> (..., 3, 3) adapted frame with columns e1, e2, e3
    """
    point: Callable
    chart: Optional[Callable] = None
    chart_jacobian: Optional[Callable] = None
    frame: Optional[Callable] = None


@dataclass
class SurfaceMesh:
    """Grid of surface points over two parameter axes"""
    axes: Tuple[str, str]
    a_values: np.ndarray
    b_values: np.ndarray
    points: np.ndarray  # (n_a, n_b, 3)
    signature: Signature
    chart: Optional[np.ndarray] = None  # (n_a, n_b, 2)
    frames: Optional[np.ndarray] = None  # (n_a, n_b, 3, 3)
    evaluator: Optional[SurfaceEvaluator] = field(default=None, repr=False)
    residuals: Dict[str, np.ndarray] = field(default_factory=dict)
    metadata: Dict = field(default_factory=dict)

    def __post_init__(self):
        expected = (len(self.a_values), len(self.b_values), 3)
        if self.points.shape != expected:
            raise ValueError(f"Mesh points have shape {self.points.shape}, expected {expected}")
        if min(expected[:2]) < 1:
            raise ValueError("Mesh is empty")

    @classmethod
    def from_evaluator(cls, axes: Tuple[str, str], a_values, b_values,
                       evaluator: SurfaceEvaluator, signature: Signature,
                       metadata: Optional[Dict] = None) -> 'SurfaceMesh':
        """Sample every available callable of the evaluator on the grid"""
        a_values = np.asarray(a_values, dtype=float)
        b_values = np.asarray(b_values, dtype=float)
        A, B = np.meshgrid(a_values, b_values, indexing='ij')
        return cls(
            axes=axes,
            a_values=a_values,
            b_values=b_values,
            points=np.asarray(evaluator.point(A, B), dtype=float),
            signature=signature,
            chart=None if evaluator.chart is None else np.asarray(evaluator.chart(A, B), dtype=float),
            frames=None if evaluator.frame is None else np.asarray(evaluator.frame(A, B), dtype=float),
            evaluator=evaluator,
            metadata=dict(metadata or {})
        )

    @property
    def shape(self) -> Tuple[int, int]:
        return self.points.shape[0], self.points.shape[1]

    @property
    def n_vertices(self) -> int:
        return self.shape[0] * self.shape[1]

    def grid(self) -> Tuple[np.ndarray, np.ndarray]:
        return np.meshgrid(self.a_values, self.b_values, indexing='ij')

    def faces(self) -> np.ndarray:
        """Quad faces as zero-based row-major vertex indices, shape (n_faces, 4)"""
        n_a, n_b = self.shape
        i, j = np.meshgrid(np.arange(n_a - 1), np.arange(n_b - 1), indexing='ij')
        i, j = i.ravel(), j.ravel()
        return np.stack([i * n_b + j, (i + 1) * n_b + j, (i + 1) * n_b + j + 1, i * n_b + j + 1], axis=1)

    def summary(self) -> Dict[str, Dict[str, Optional[float]]]:
        return {name: channel_summary(values) for name, values in self.residuals.items()}

    def to_dict(self) -> Dict:
        """Metadata and residual summaries (vertex data goes through the exporters)"""
        return {
            'axes': list(self.axes),
            'shape': list(self.shape),
            'a_range': [float(self.a_values[0]), float(self.a_values[-1])],
            'b_range': [float(self.b_values[0]), float(self.b_values[-1])],
            'signature': self.signature.value,
            'residuals': self.summary(),
            'metadata': self.metadata
        }
