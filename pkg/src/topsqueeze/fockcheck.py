"""Brute-force truncated Fock-space simulation of small signal/idler systems.

This is the independent reference for the Gaussian model: the same
Hamiltonian is written in second quantization,

    K = sum H_s[m, n] a_m^dag a_n + sum H_i[m, n] b_m^dag b_n
        + sum_n (g_n a_n^dag b_n^dag + conj(g_n) a_n b_n),

and the state is stepped as ``psi <- exp(i K dz) psi`` slice by slice.
Modes are ordered signals first, then idlers; basis states are
lexicographic in the occupation numbers (first mode most significant).
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from ._linalg import expm_multiply
from .errors import CutoffError, NumericalError
from .moments import MomentSet

log = logging.getLogger(__name__)

MAX_DIMENSION = 100_000
MAX_MODES = 4
LEAKAGE_TOL = 1e-6
NORM_TOL = 1e-9


@dataclass(frozen=True)
class FockSpace:
    n_signal: int
    n_idler: int
    cutoff: int

    def __post_init__(self):
        if self.n_signal < 1 or self.n_idler < 1:
            raise ValueError("need at least one signal and one idler mode")
        if self.mode_count > MAX_MODES:
            raise ValueError(f"at most {MAX_MODES} modes, got {self.mode_count}")
        if self.cutoff < 1:
            raise ValueError(f"cutoff must be at least 1, got {self.cutoff}")
        if self.dimension > MAX_DIMENSION:
            raise ValueError(
                f"Fock space dimension {self.dimension} exceeds the {MAX_DIMENSION} guard"
            )

    @property
    def mode_count(self):
        return self.n_signal + self.n_idler

    @property
    def dimension(self):
        return (self.cutoff + 1) ** self.mode_count

    def signal_mode(self, k):
        return k

    def idler_mode(self, k):
        return self.n_signal + k

    def annihilator(self, mode):
        """Sparse annihilation operator for one mode on the full space."""
        d = self.cutoff + 1
        single = sp.diags(np.sqrt(np.arange(1, d)), 1, shape=(d, d), format="csr")
        out = None
        for k in range(self.mode_count):
            factor = single if k == mode else sp.identity(d, format="csr")
            out = factor if out is None else sp.kron(out, factor, format="csr")
        return out

    def occupations(self):
        """Occupation numbers of every basis state, shape (dimension, modes)."""
        d = self.cutoff + 1
        grids = np.indices((d,) * self.mode_count).reshape(self.mode_count, -1)
        return grids.T


@dataclass(frozen=True)
class FockStateVector:
    amplitudes: np.ndarray
    space: FockSpace

    @property
    def norm(self):
        return float(np.linalg.norm(self.amplitudes))

    def leakage(self):
        """Population in basis states with any mode at the cutoff."""
        occ = self.space.occupations()
        top = np.any(occ == self.space.cutoff, axis=1)
        return float(np.sum(np.abs(self.amplitudes[top]) ** 2))


def vacuum(space):
    psi = np.zeros(space.dimension, dtype=complex)
    psi[0] = 1.0
    return FockStateVector(psi, space)


def build_generator(h_s, h_i, pump_slice_amplitudes, gamma, space):
    """Hermitian generator ``K`` for one z slice.

    ``pump_slice_amplitudes`` are the per-site gains ``A_n^2`` (complex)
    over that slice; the pair term uses ``gamma * A_n^2``.
    """
    hs = np.atleast_2d(np.asarray(h_s, dtype=float))
    hi = np.atleast_2d(np.asarray(h_i, dtype=float))
    if hs.shape != (space.n_signal,) * 2 or hi.shape != (space.n_idler,) * 2:
        raise ValueError("Hamiltonian sizes do not match the Fock space")
    g = gamma * np.asarray(pump_slice_amplitudes, dtype=complex)
    if g.shape != (space.n_signal,) or space.n_signal != space.n_idler:
        raise ValueError("pair generation needs one gain per site with equal signal/idler sites")
    a = [space.annihilator(space.signal_mode(k)) for k in range(space.n_signal)]
    b = [space.annihilator(space.idler_mode(k)) for k in range(space.n_idler)]
    k_op = sp.csr_matrix((space.dimension, space.dimension), dtype=complex)
    for m in range(space.n_signal):
        for n in range(space.n_signal):
            if hs[m, n]:
                k_op = k_op + hs[m, n] * (a[m].T @ a[n])
    for m in range(space.n_idler):
        for n in range(space.n_idler):
            if hi[m, n]:
                k_op = k_op + hi[m, n] * (b[m].T @ b[n])
    for n in range(space.n_signal):
        if g[n]:
            pair = a[n].T @ b[n].T
            k_op = k_op + g[n] * pair + np.conj(g[n]) * pair.T
    return k_op.tocsr()


def evolve_fock(state, generator, dz, leakage_tol=LEAKAGE_TOL):
    """``exp(i K dz) psi`` with norm and cutoff-leakage monitoring."""
    psi = expm_multiply(1j * generator, state.amplitudes, dz)
    out = FockStateVector(psi, state.space)
    drift = abs(out.norm - state.norm)
    if drift > NORM_TOL:
        raise NumericalError(f"norm drifted by {drift:.2e} in one slice")
    if drift > 0:
        log.debug("norm drift %.2e over slice dz=%g", drift, dz)
    leak = out.leakage()
    if leak > leakage_tol:
        raise CutoffError(
            f"{leak:.2e} of the population sits at the cutoff {state.space.cutoff}; "
            "increase the cutoff"
        )
    return out


def run_slices(h_s, h_i, slices, space, leakage_tol=LEAKAGE_TOL):
    """Evolve vacuum through ``[(dz, gamma * A^2), ...]`` slices."""
    state = vacuum(space)
    for dz, g in slices:
        gen = build_generator(h_s, h_i, g, 1.0, space)
        state = evolve_fock(state, gen, dz, leakage_tol)
    return state


def tmsv_by_evolution(lam, cutoff=12):
    """Single-site two-mode squeezed vacuum with ``tanh(r) = lam`` by evolution."""
    r = float(np.arctanh(lam))
    space = FockSpace(1, 1, cutoff)
    gen = build_generator([[0.0]], [[0.0]], [1.0], 1.0, space)
    return evolve_fock(vacuum(space), gen, r)


def moments_fock(state):
    """Exact second moments, in the Gaussian module's conventions."""
    space = state.space
    psi = state.amplitudes
    a_psi = [space.annihilator(space.signal_mode(k)) @ psi for k in range(space.n_signal)]
    b_psi = [space.annihilator(space.idler_mode(k)) @ psi for k in range(space.n_idler)]
    ns = np.array([[np.vdot(a_psi[n], a_psi[m]) for n in range(space.n_signal)] for m in range(space.n_signal)])
    ni = np.array([[np.vdot(b_psi[n], b_psi[m]) for n in range(space.n_idler)] for m in range(space.n_idler)])
    m_mat = np.empty((space.n_signal, space.n_idler), dtype=complex)
    for m in range(space.n_signal):
        am = space.annihilator(space.signal_mode(m))
        for n in range(space.n_idler):
            m_mat[m, n] = np.vdot(psi, am @ b_psi[n])
    return MomentSet(ns, ni, m_mat)


def g2_cross_fock(state, s_site, i_site):
    """``<a^dag b^dag b a> / (<a^dag a><b^dag b>)`` evaluated directly (1-based sites)."""
    space = state.space
    a = space.annihilator(space.signal_mode(s_site - 1))
    b = space.annihilator(space.idler_mode(i_site - 1))
    psi = state.amplitudes
    ba = b @ (a @ psi)
    ns = np.vdot(a @ psi, a @ psi).real
    ni = np.vdot(b @ psi, b @ psi).real
    return float(np.vdot(ba, ba).real / (ns * ni))


def number_distribution(state, s_site, i_site):
    """Joint photon-number distribution of one signal and one idler mode."""
    space = state.space
    d = space.cutoff + 1
    probs = (np.abs(state.amplitudes) ** 2).reshape((d,) * space.mode_count)
    s_axis = space.signal_mode(s_site - 1)
    i_axis = space.idler_mode(i_site - 1)
    others = tuple(ax for ax in range(space.mode_count) if ax not in (s_axis, i_axis))
    p = probs.sum(axis=others) if others else probs
    return p if s_axis < i_axis else p.T


def click_probability(n, eta, dark=0.0):
    """Click probability of an on/off detector given ``n`` incident photons."""
    return 1.0 - (1.0 - dark) * (1.0 - eta) ** np.asarray(n)


def heralded_from_distribution(p, detection):
    """Heralded ``g2`` and heralding efficiency from a joint distribution ``P[n_s, n_i]``.

    The idler click (efficiency ``eta_i``) heralds; ``g2`` is that of the
    conditional signal photon-number distribution, ``eta_H`` is the
    probability that the signal detector (efficiency ``eta_s``) also clicks.
    """
    p = np.asarray(p, dtype=float)
    n_s = np.arange(p.shape[0])
    n_i = np.arange(p.shape[1])
    herald = click_probability(n_i, detection.eta_i, detection.dark_counts)
    cond = p @ herald
    p_herald = cond.sum()
    if p_herald < 1e-12:
        raise NumericalError(f"herald probability {p_herald:.2e} is too small")
    cond = cond / p_herald
    mean = np.sum(n_s * cond)
    second = np.sum(n_s * (n_s - 1) * cond)
    g2_h = float(second / mean**2) if mean > 0 else float("nan")
    signal = click_probability(n_s, detection.eta_s, detection.dark_counts)
    eta_h = float(np.sum(cond * signal))
    return g2_h, eta_h


def heralded_g2_fock(state, s_site, i_site, detection):
    return heralded_from_distribution(number_distribution(state, s_site, i_site), detection)
