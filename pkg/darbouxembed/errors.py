"""Exception hierarchy for darbouxembed"""

from typing import Optional

import numpy as np


class DarbouxEmbedError(ValueError):
    """Base class for every error raised by this package"""


class UnknownMetricError(DarbouxEmbedError):
    """Metric id or preset name not recognised"""


class InputFormatError(DarbouxEmbedError):
    """Malformed JSON input (metric, curve or generator records)"""


class DomainError(DarbouxEmbedError):
    """Argument outside the declared domain or chart"""


class DegenerateMetricError(DarbouxEmbedError):
    """A metric coefficient vanishes (or nearly so) at the evaluation point"""


class FlatPointError(DarbouxEmbedError):
    """Gauss curvature too close to zero for the integrability conditions"""


class MixedTypeError(DarbouxEmbedError):
    """Gauss curvature changes sign across a sample grid"""


class ChartError(DarbouxEmbedError):
    """Point violates the guards of an adapted coordinate chart"""


class GeneratorError(DarbouxEmbedError):
    """Generator function has a non-positive third derivative on its domain"""


class QuadratureError(DarbouxEmbedError):
    """Quadrature produced or encountered non-finite values"""


class IntegrationError(DarbouxEmbedError):
    """ODE integration failed; carries the last good state"""
    
    def __init__(
        self,
        message: str,
        t_last: Optional[float] = None,
        state_last: Optional[np.ndarray] = None
    ):
        super().__init__(message)
        self.t_last = t_last
        self.state_last = state_last


class LiftBreakdownError(DarbouxEmbedError):
    """Lift of an initial curve reached r = 0 or s = 0"""
    
    def __init__(self, message: str, t: Optional[float] = None):
        super().__init__(message)
        self.t = t


class ProfileSingularityError(DarbouxEmbedError):
    """Extrinsic profile reached z1 = 0 (axis point or loss of transversality)"""
    
    def __init__(self, message: str, s: Optional[float] = None):
        super().__init__(message)
        self.s = s
