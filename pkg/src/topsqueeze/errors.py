"""Exception hierarchy.

Configuration problems and numerical failures are kept apart so the command
line can map them to distinct exit codes.
"""


class TopsqueezeError(Exception):
    """Base class for all package errors."""


class ConfigError(TopsqueezeError, ValueError):
    """Invalid or inconsistent configuration."""


class LatticeError(ConfigError):
    """Invalid lattice geometry or dimerization pattern."""


class NumericalError(TopsqueezeError, ArithmeticError):
    """A numerical routine failed to converge or left its validity range."""


class GapClosureError(NumericalError):
    """The bulk gap closes so the topological invariant is undefined."""


class NoPhaseMatchingError(NumericalError):
    """No root of the phase mismatch was found in the search band."""


class CutoffError(NumericalError):
    """Population leaked into the top Fock level beyond tolerance."""


class UndefinedCorrelationError(NumericalError):
    """A normalized correlation was requested where a photon number is zero."""
