"""Spectra, gap modes, local density of states and the bulk Zak phase."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._linalg import jacobi_eigh
from .errors import GapClosureError

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True)
class Spectrum:
    eigenvalues: np.ndarray  # ascending, 1/mm
    eigenvectors: np.ndarray  # columns aligned with eigenvalues

    @property
    def source_dimension(self):
        return self.eigenvalues.shape[0]

    def mode(self, index):
        return self.eigenvectors[:, index]


@dataclass(frozen=True)
class LdosProfile:
    energy: float
    broadening: float
    values: np.ndarray  # values[n - 1] belongs to site n


@dataclass(frozen=True)
class ZakResult:
    phase: float  # radians in [0, 2 pi)
    k_samples: int
    converged: bool


def eigendecompose(h):
    """Full spectrum of a lattice Hamiltonian (cyclic Jacobi)."""
    w, v = jacobi_eigh(h.matrix)
    return Spectrum(w, v)


def residuals(h, spectrum):
    """Per-mode ``||H v - E v||``."""
    m = h.matrix
    r = m @ spectrum.eigenvectors - spectrum.eigenvectors * spectrum.eigenvalues
    return np.linalg.norm(r, axis=0)


def find_gap_modes(spectrum, J_strong, zero_window=0.05):
    """Indices of modes with ``|E| < zero_window * J_strong``.

    No gap check is made: for a gapless (uniform) chain modes near zero are
    returned as well, so callers should confirm the gap is open first.
    """
    if not 0 < zero_window < 1:
        raise ValueError(f"zero_window must lie in (0, 1), got {zero_window}")
    return [int(i) for i in np.flatnonzero(np.abs(spectrum.eigenvalues) < zero_window * J_strong)]


def gaussian(x, sigma):
    return np.exp(-0.5 * (x / sigma) ** 2) / (sigma * math.sqrt(TWO_PI))


def ldos(spectrum, energy, broadening, modes=None):
    """Local density of states with a unit-area Gaussian in place of the delta.

    ``values[n] = sum_m g(E - E_m) |psi_n^m|^2``. Restrict the sum to
    ``modes`` (indices) to look at a subset, e.g. the gap modes.
    """
    if not broadening > 0:
        raise ValueError(f"broadening must be positive, got {broadening}")
    idx = np.arange(spectrum.source_dimension) if modes is None else np.asarray(modes, dtype=int)
    weights = gaussian(energy - spectrum.eigenvalues[idx], broadening)
    values = (np.abs(spectrum.eigenvectors[:, idx]) ** 2) @ weights
    return LdosProfile(float(energy), float(broadening), values)


def broadened_dos(spectrum, energy, broadening):
    return float(gaussian(energy - spectrum.eigenvalues, broadening).sum())


def _lower_band_states(J_intra, J_inter, k_samples):
    ks = TWO_PI * np.arange(k_samples) / k_samples
    states = np.empty((k_samples, 2), dtype=complex)
    for j, k in enumerate(ks):
        f = J_intra + J_inter * np.exp(-1j * k)
        hk = np.array([[0.0, f], [np.conj(f), 0.0]])
        _, vecs = np.linalg.eigh(hk)
        states[j] = vecs[:, 0]
    return states


def _wilson_phase(J_intra, J_inter, k_samples):
    u = _lower_band_states(J_intra, J_inter, k_samples)
    overlaps = np.einsum("ki,ki->k", u.conj(), np.roll(u, -1, axis=0))
    phase = (-np.angle(np.prod(overlaps))) % TWO_PI
    if TWO_PI - phase < 1e-12:
        phase = 0.0
    return float(phase)


def circular_distance(a, b):
    d = abs(a - b) % TWO_PI
    return min(d, TWO_PI - d)


def zak_phase(J_intra, J_inter, k_samples=512, tol=1e-6 * TWO_PI):
    """Zak phase of the lower band of the bulk two-site chain.

    Discrete Wilson loop over a uniform Brillouin-zone grid; the Bloch basis
    is periodic in k so the loop closes on the first sample. ``converged``
    reports whether doubling ``k_samples`` moves the phase by less than tol.
    """
    if J_intra <= 0 or J_inter <= 0:
        raise ValueError("couplings must be positive")
    if J_intra == J_inter:
        raise GapClosureError(f"gap closes at J_intra = J_inter = {J_intra}")
    if k_samples < 64:
        raise ValueError(f"k_samples must be at least 64, got {k_samples}")
    phase = _wilson_phase(J_intra, J_inter, k_samples)
    refined = _wilson_phase(J_intra, J_inter, 2 * k_samples)
    return ZakResult(phase, k_samples, circular_distance(phase, refined) < tol)
