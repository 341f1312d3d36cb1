"""Birefringent phase matching for degenerate-pump four-wave mixing.

Frequencies are angular (rad/s), wavevectors in rad/m. The pump photons see
an index raised by the birefringence ``delta_n``; signal and idler see the
plain material index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.constants import c as SPEED_OF_LIGHT

from .errors import ConfigError, NoPhaseMatchingError

# Malitson (1965) fused silica; wavelengths in micrometres
SILICA_B = (0.6961663, 0.4079426, 0.8974794)
SILICA_C_UM = (0.0684043, 0.1162414, 9.896161)


def omega_from_wavelength(wavelength_nm):
    return 2.0 * math.pi * SPEED_OF_LIGHT / (wavelength_nm * 1e-9)


def wavelength_from_omega(omega):
    return 2.0 * math.pi * SPEED_OF_LIGHT / omega * 1e9


@dataclass(frozen=True)
class Sellmeier:
    B: tuple = SILICA_B
    C_um: tuple = SILICA_C_UM

    def index(self, omega):
        lam_um = 2.0 * np.pi * SPEED_OF_LIGHT / np.asarray(omega, dtype=float) * 1e6
        lam2 = lam_um**2
        n2 = 1.0 + sum(b * lam2 / (lam2 - c * c) for b, c in zip(self.B, self.C_um))
        return np.sqrt(n2)


@dataclass(frozen=True)
class PhaseMatchingProblem:
    pump_angular_frequency: float
    dispersion: Sellmeier = field(default_factory=Sellmeier)
    delta_n: float = 0.0
    # largest detuning searched, as a fraction of the pump frequency
    search_fraction: float = 0.75
    scan_points: int = 4000

    def __post_init__(self):
        if self.delta_n < 0:
            raise ConfigError(f"birefringence must be non-negative, got {self.delta_n}")
        if not 0 < self.search_fraction < 1:
            raise ConfigError("search_fraction must lie in (0, 1)")
        wp = self.pump_angular_frequency
        lo = wp * (1 - self.search_fraction)
        hi = wp * (1 + self.search_fraction)
        n = self.dispersion.index(np.array([lo, wp, hi]))
        if not np.all(np.isfinite(n)) or np.any(n <= 1):
            raise ConfigError("refractive index must exceed 1 over the search band")

    def pump_wavevector(self):
        wp = self.pump_angular_frequency
        return float(self.dispersion.index(wp)) * wp / SPEED_OF_LIGHT

    def mismatch(self, detuning):
        """Phase mismatch at signal/idler detuning ``+-detuning`` from the pump."""
        wp = self.pump_angular_frequency
        ws = wp + np.asarray(detuning, dtype=float)
        wi = wp - np.asarray(detuning, dtype=float)
        n = self.dispersion.index
        return (
            2.0 * (n(wp) + self.delta_n) * wp / SPEED_OF_LIGHT
            - n(ws) * ws / SPEED_OF_LIGHT
            - n(wi) * wi / SPEED_OF_LIGHT
        )


@dataclass(frozen=True)
class PhaseMatchingSolution:
    omega_s: float
    omega_i: float
    detuning: float
    residual: float

    @property
    def wavelength_s_nm(self):
        return wavelength_from_omega(self.omega_s)

    @property
    def wavelength_i_nm(self):
        return wavelength_from_omega(self.omega_i)


def bisect(f, lo, hi, rtol=1e-12, max_iter=200):
    """Bisection on a bracket with ``f(lo)`` and ``f(hi)`` of opposite sign."""
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if np.sign(flo) == np.sign(fhi):
        raise ValueError("root is not bracketed")
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        fmid = f(mid)
        if fmid == 0:
            return mid
        if np.sign(fmid) == np.sign(flo):
            lo, flo = mid, fmid
        else:
            hi, fhi = mid, fmid
        if hi - lo <= rtol * abs(hi):
            break
    return lo if abs(flo) <= abs(fhi) else hi


def solve_phase_matching(problem):
    """Smallest non-negative detuning with zero phase mismatch.

    Returns signal/idler at ``omega_p +- detuning``, so energy conservation
    holds by construction.
    """
    wp = problem.pump_angular_frequency
    kp = problem.pump_wavevector()
    f = lambda x: float(problem.mismatch(x))  # noqa: E731

    d0 = f(0.0)
    if abs(d0) <= 1e-12 * abs(kp):
        return PhaseMatchingSolution(wp, wp, 0.0, d0)

    grid = np.linspace(0.0, problem.search_fraction * wp, problem.scan_points)
    values = problem.mismatch(grid)
    flips = np.flatnonzero(np.sign(values[1:]) != np.sign(values[:-1]))
    if flips.size == 0:
        raise NoPhaseMatchingError(
            f"no phase matching for delta_n={problem.delta_n}: mismatch spans "
            f"[{values.min():.4e}, {values.max():.4e}] rad/m over detuning "
            f"[0, {grid[-1]:.4e}] rad/s"
        )
    j = flips[0]
    root = bisect(f, grid[j], grid[j + 1])
    return PhaseMatchingSolution(wp + root, wp - root, root, f(root))
