"""Cross-checks of the Gaussian model against brute-force Fock evolution."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fockcheck, squeezer
from .moments import DetectionModel

GAIN_LEVELS = (0.05, 0.1, 0.2)
LAMBDAS = (0.1, 0.2, 0.3)
ETAS = (0.3, 0.6, 1.0)


@dataclass(frozen=True)
class OracleComparison:
    sites: int
    gain: float
    cutoff: int
    gaussian_n: np.ndarray
    fock_n: np.ndarray
    gaussian_g2: np.ndarray
    fock_g2: np.ndarray

    @property
    def worst_relative_error(self):
        en = np.abs(self.fock_n - self.gaussian_n) / np.abs(self.gaussian_n)
        eg = np.abs(self.fock_g2 - self.gaussian_g2) / np.abs(self.gaussian_g2)
        return float(max(en.max(), eg.max()))


def small_system(sites, coupling=0.3):
    """Signal/idler Hamiltonians for a 1- or 2-site coupler (1/mm)."""
    if sites == 1:
        return np.zeros((1, 1)), np.zeros((1, 1))
    if sites == 2:
        h = np.array([[0.0, coupling], [coupling, 0.0]])
        return 1.2 * h, 0.85 * h
    raise ValueError("the Fock oracle is limited to 1 or 2 sites")


def oracle_inputs(sites, gain, z_final=1.0, steps=20):
    """Constant pump with ``gamma |A|^2 z = gain`` at every site (gamma = 1)."""
    h_s, h_i = small_system(sites)
    z = np.linspace(0.0, z_final, steps + 1)
    amp = np.sqrt(gain / z_final) * np.ones(sites)
    if sites == 2:
        amp = amp * np.array([1.0, np.exp(0.4j)])
    return h_s, h_i, squeezer.constant_pump(amp, z), z_final


def compare_gaussian_fock(sites, gain, cutoff=8, steps=20):
    h_s, h_i, pump, zf = oracle_inputs(sites, gain, steps=steps)
    bmap = squeezer.propagate_bogoliubov(h_s, h_i, pump, 1.0, zf)
    mom = squeezer.moments_from_bogoliubov(bmap)
    space = fockcheck.FockSpace(sites, sites, cutoff)
    state = fockcheck.run_slices(h_s, h_i, squeezer.slice_gains(pump, 1.0, zf), space)
    fmom = fockcheck.moments_fock(state)
    sites_idx = range(1, sites + 1)
    return OracleComparison(
        sites,
        gain,
        cutoff,
        np.concatenate([np.diag(mom.N_s).real, np.diag(mom.N_i).real]),
        np.concatenate([np.diag(fmom.N_s).real, np.diag(fmom.N_i).real]),
        np.array([squeezer.g2_cross(mom, k, k) for k in sites_idx]),
        np.array([fockcheck.g2_cross_fock(state, k, k) for k in sites_idx]),
    )


@dataclass(frozen=True)
class RoundTrip:
    lam: float
    eta: float
    g2_heralded: float
    eta_H: float
    lambda_sq: float

    @property
    def relative_error(self):
        return (self.lambda_sq - self.lam**2) / self.lam**2


def heralded_round_trip(lam, eta, cutoff=12):
    """Fock-generated heralded metrics of a TMSV fed back through the estimator."""
    state = fockcheck.tmsv_by_evolution(lam, cutoff)
    g2_h, eta_h = fockcheck.heralded_g2_fock(state, 1, 1, DetectionModel(eta, eta, 0.0))
    return RoundTrip(lam, eta, g2_h, eta_h, squeezer.squeeze_param_from_heralding(g2_h, eta_h))


def heralded_table(lams=LAMBDAS, etas=ETAS, cutoff=12):
    return [heralded_round_trip(lam, eta, cutoff) for lam in lams for eta in etas]
