"""Signature-aware inner products on three-component vectors"""

from enum import Enum
from typing import Tuple

import numpy as np

# Vec3 and Mat3 are plain float64 arrays of shape (..., 3) and (..., 3, 3)
Vec3 = np.ndarray
Mat3 = np.ndarray


class Signature(Enum):
    """Ambient flat metrics: Euclidean R^3 or Minkowski R^{1,2}"""
    EUCLIDEAN = "euclidean"
    LORENTZ = "lorentz"
    
    @property
    def diag(self) -> np.ndarray:
        """Diagonal of the inner product matrix"""
        if self is Signature.EUCLIDEAN:
            return np.array([1.0, 1.0, 1.0])
        return np.array([1.0, -1.0, -1.0])
    
    @property
    def matrix(self) -> Mat3:
        return np.diag(self.diag)
    
    def dot(self, a: Vec3, b: Vec3) -> np.ndarray:
        """Signature-weighted dot product, broadcasting over leading axes"""
        return np.sum(np.asarray(a) * self.diag * np.asarray(b), axis=-1)
    
    def quadratic_form(self, x: Vec3) -> np.ndarray:
        """Q(x) = <x, x>; for LORENTZ this is x1^2 - x2^2 - x3^2"""
        return self.dot(x, x)
    
    def cross(self, a: Vec3, b: Vec3) -> Vec3:
        """Vector n with <n, c> = det(a, b, c) for every c"""
        return np.cross(a, b) * self.diag
    
    @property
    def surface_sign(self) -> float:
        """Product eps1*eps2 of the tangent-plane signs of a non-degenerate surface"""
        return 1.0 if self is Signature.EUCLIDEAN else -1.0


def unit(v: Vec3, signature: Signature = Signature.EUCLIDEAN) -> Vec3:
    """Normalise v to |<v, v>| = 1"""
    norm = np.sqrt(np.abs(signature.quadratic_form(v)))
    return np.asarray(v) / np.expand_dims(norm, -1)


def gram(frame: Mat3, signature: Signature) -> Mat3:
    """Gram matrix of the columns of frame: frame^T diag frame"""
    return np.swapaxes(frame, -1, -2) @ (signature.diag[:, None] * frame)


def group_defect(g: Mat3, signature: Signature) -> Tuple[float, float]:
    """Return (max |g^T eta g - eta|, |det g - 1|) for a single matrix"""
    g = np.asarray(g, dtype=float)
    orth = float(np.max(np.abs(gram(g, signature) - signature.matrix)))
    det = float(abs(np.linalg.det(g) - 1.0))
    return orth, det


def is_proper_orthochronous(g: Mat3, signature: Signature, tol: float = 1e-10) -> bool:
    """Check g lies in the identity component of the isometry group"""
    orth, det = group_defect(g, signature)
    ok = orth < tol and det < tol
    if signature is Signature.LORENTZ:
        ok = ok and g[0, 0] > 0
    return bool(ok)
