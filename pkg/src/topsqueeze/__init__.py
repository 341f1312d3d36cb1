"""Topologically protected squeezed light in a dimerized waveguide lattice.

Lattice construction, spectral and topological analysis, classical pump
propagation, Gaussian SFWM pair generation and correlation metrics, with a
truncated Fock-space oracle for cross-checking.
"""

from .errors import (
    ConfigError,
    CutoffError,
    GapClosureError,
    LatticeError,
    NoPhaseMatchingError,
    NumericalError,
    TopsqueezeError,
    UndefinedCorrelationError,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "CutoffError",
    "GapClosureError",
    "LatticeError",
    "NoPhaseMatchingError",
    "NumericalError",
    "TopsqueezeError",
    "UndefinedCorrelationError",
]
