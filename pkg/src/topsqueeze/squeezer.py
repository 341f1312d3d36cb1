"""Gaussian model of pump-driven pair generation in the lattice.

Signal (a) and idler (b) operators obey, with an undepleted classical pump
A_n(z) and gain gamma,

    d a / dz = i H_s a + i gamma diag(A^2) b^dag
    d b / dz = i H_i b + i gamma diag(A^2) a^dag

The linear system for X = (a, b^dag) is integrated with one matrix
exponential per z slice, giving

    a_out     = U a + V b^dag
    b_out^dag = W a + Y b^dag

Moment conventions: ``N[m, n] = <a_n^dag a_m>`` (so ``N_s = V V^dag``) and
``M[m, n] = <a_m b_n>``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from . import fockcheck
from ._linalg import expm
from .errors import CutoffError, NumericalError, UndefinedCorrelationError
from .moments import DetectionModel, MomentSet  # noqa: F401  (re-exported)
from .propagation import field_history, site_vector

SYMPLECTIC_TOL = 1e-6
NONCLASSICAL_G2 = 2.0
BELL_G2 = 6.0


@dataclass(frozen=True)
class PumpProfile:
    z_grid: np.ndarray
    amplitudes: np.ndarray  # (z, site), |A|^2 in watts

    @property
    def power(self):
        return np.sum(np.abs(self.amplitudes) ** 2, axis=1)


@dataclass(frozen=True)
class BogoliubovMap:
    U: np.ndarray
    V: np.ndarray
    W: np.ndarray
    Y: np.ndarray
    z_final: float
    gain_parameter: float

    @property
    def dimension(self):
        return self.U.shape[0]

    def symplectic_residual(self):
        """Largest deviation from the bosonic constraints on both bands."""
        n = self.dimension
        eye = np.eye(n)
        sig = self.U @ self.U.conj().T - self.V @ self.V.conj().T - eye
        # idler: b_out = Y* b + W* a^dag
        idl = self.Y.conj() @ self.Y.T - self.W.conj() @ self.W.T - eye
        # [a_out, b_out] = 0
        cross = self.U @ self.W.conj().T - self.V @ self.Y.conj().T
        return float(max(np.abs(sig).max(), np.abs(idl).max(), np.abs(cross).max()))


@dataclass(frozen=True)
class CorrelationReport:
    port: int
    z: float
    g2_cross: float
    g2_heralded: float
    eta_H: float
    lambda_sq: float
    mean_photon_number: float
    lambda_eff: float = float("nan")
    pairing_purity: float = float("nan")
    uncertainty: dict = field(default_factory=dict)

    @property
    def nonclassical(self):
        return self.g2_cross > NONCLASSICAL_G2

    @property
    def bell_capable(self):
        return self.g2_cross > BELL_G2


def pump_profile(h, input_site, z_grid, power=1.0, spectrum=None):
    """Classical pump injected into one site, scaled to ``power`` watts."""
    psi0 = site_vector(h.dimension, input_site)
    amps = field_history(h, psi0, z_grid, spectrum) * math.sqrt(power)
    return PumpProfile(np.asarray(z_grid, dtype=float), amps)


def constant_pump(amplitudes, z_grid):
    """Pump that does not evolve along z (useful for closed-form checks)."""
    z = np.asarray(z_grid, dtype=float)
    a = np.broadcast_to(np.asarray(amplitudes, dtype=complex), (z.size, len(amplitudes)))
    return PumpProfile(z, np.array(a))


def slice_gains(pump, gamma, z_final):
    """Piecewise-constant slices ``(dz, gamma * A^2)`` covering ``[0, z_final]``.

    Each slice uses the trapezoidal average of ``A^2`` at its two ends.
    """
    z = pump.z_grid
    if z[0] != 0:
        raise ValueError("pump z grid must start at 0")
    hits = np.flatnonzero(np.isclose(z, z_final, rtol=0, atol=1e-9))
    if hits.size == 0:
        raise ValueError(f"z_final={z_final} is not a point of the pump grid")
    stop = int(hits[0])
    a2 = pump.amplitudes**2
    out = []
    for k in range(stop):
        dz = z[k + 1] - z[k]
        out.append((dz, gamma * 0.5 * (a2[k] + a2[k + 1])))
    return out


def _slice_generator(h_s, h_i, g):
    return np.block(
        [
            [1j * h_s, 1j * np.diag(g)],
            [-1j * np.diag(np.conj(g)), -1j * h_i],
        ]
    )


def propagate_bogoliubov_checkpoints(h_s, h_i, pump, gamma, checkpoints):
    """Bogoliubov maps at each distance in ``checkpoints`` (one pass)."""
    hs = np.asarray(getattr(h_s, "matrix", h_s), dtype=float)
    hi = np.asarray(getattr(h_i, "matrix", h_i), dtype=float)
    if hs.shape != hi.shape:
        raise ValueError("signal and idler Hamiltonians must have the same dimension")
    if gamma < 0:
        raise ValueError(f"gain must be non-negative, got {gamma}")
    n = hs.shape[0]
    targets = sorted(float(z) for z in checkpoints)
    slices = slice_gains(pump, gamma, targets[-1])
    z = 0.0
    t = np.eye(2 * n, dtype=complex)
    maps = {}
    pending = list(targets)
    while pending and abs(pending[0]) < 1e-9:
        maps[pending.pop(0)] = _as_map(t, 0.0, gamma)
    cache = {}
    for dz, g in slices:
        key = round(dz, 12)
        if gamma == 0 and key in cache:
            step = cache[key]
        else:
            step = expm(_slice_generator(hs, hi, g) * dz)
            cache[key] = step
        t = step @ t
        z += dz
        while pending and abs(pending[0] - z) < 1e-9:
            bmap = _as_map(t, pending[0], gamma)
            res = bmap.symplectic_residual()
            if res > SYMPLECTIC_TOL:
                raise NumericalError(
                    f"symplectic identity violated by {res:.2e} at z={z:.3f} mm; "
                    "refine the z step"
                )
            maps[pending.pop(0)] = bmap
    return maps


def propagate_bogoliubov(h_s, h_i, pump, gamma, z_final):
    return propagate_bogoliubov_checkpoints(h_s, h_i, pump, gamma, [z_final])[float(z_final)]


def _as_map(t, z, gamma):
    n = t.shape[0] // 2
    return BogoliubovMap(t[:n, :n], t[:n, n:], t[n:, :n], t[n:, n:], float(z), float(gamma))


def first_order_v(h_s, h_i, pump, gamma, z_final):
    """First-order (in gamma) V by trapezoidal quadrature on the pump grid.

    ``V1 = i gamma int_0^zf exp(i H_s (zf - z)) diag(A(z)^2) exp(-i H_i z) dz``
    """
    hs = np.asarray(getattr(h_s, "matrix", h_s), dtype=float)
    hi = np.asarray(getattr(h_i, "matrix", h_i), dtype=float)
    ws, vs = np.linalg.eigh(hs)
    wi, vi = np.linalg.eigh(hi)
    z = pump.z_grid
    stop = int(np.flatnonzero(np.isclose(z, z_final, atol=1e-9))[0])
    zs = z[: stop + 1]
    vals = []
    for k, zk in enumerate(zs):
        left = (vs * np.exp(1j * ws * (z_final - zk))) @ vs.T
        right = (vi * np.exp(-1j * wi * zk)) @ vi.T
        vals.append(left @ np.diag(pump.amplitudes[k] ** 2) @ right)
    return 1j * gamma * np.trapezoid(np.array(vals), zs, axis=0)


def moments_from_bogoliubov(bmap):
    """Second moments of the output for vacuum input."""
    U, V, W = bmap.U, bmap.V, bmap.W
    n_s = V @ V.conj().T
    n_i = W.conj() @ W.T
    m = U @ W.conj().T
    return MomentSet(_herm(n_s), _herm(n_i), m)


def _herm(a):
    return 0.5 * (a + a.conj().T)


def apply_loss(moments, detection):
    """Linear loss ``eta`` on each arm (beamsplitter with vacuum)."""
    return MomentSet(
        detection.eta_s * moments.N_s,
        detection.eta_i * moments.N_i,
        math.sqrt(detection.eta_s * detection.eta_i) * moments.M,
    )


def add_background(moments, detection):
    """Uncorrelated background of ``dark_counts`` photons per gate on every mode."""
    d = detection.dark_counts
    if d == 0:
        return moments
    eye = np.eye(moments.dimension)
    return replace(moments, N_s=moments.N_s + d * eye, N_i=moments.N_i + d * eye)


def detect(moments, detection):
    """Moments as seen by the detectors: loss, then background."""
    return add_background(apply_loss(moments, detection), detection)


def reduced_two_mode(moments, s_port, i_port):
    """``(n_s, n_i, m)`` for signal at ``s_port`` and idler at ``i_port`` (1-based)."""
    s, i = s_port - 1, i_port - 1
    return float(moments.N_s[s, s].real), float(moments.N_i[i, i].real), complex(moments.M[s, i])


def g2_cross(moments, s_port, i_port):
    """Normalized signal-idler cross-correlation of a Gaussian state.

    ``1 + |<a b>|^2 / (<a^dag a> <b^dag b>)``; the ``<a^dag b>`` term is
    absent because the model never mixes signal and idler.
    """
    ns, ni, m = reduced_two_mode(moments, s_port, i_port)
    if ns <= 0 or ni <= 0:
        raise UndefinedCorrelationError(
            f"g2 undefined: <n_s>={ns:.3e}, <n_i>={ni:.3e} at ports ({s_port}, {i_port})"
        )
    return 1.0 + abs(m) ** 2 / (ns * ni)


def gaussian_number_distribution(ns, ni, m, cutoff):
    """Joint photon-number distribution ``P[k, l]`` of a two-mode Gaussian state.

    Valid for zero-mean states whose only nonzero second moments are
    ``<a^dag a>``, ``<b^dag b>`` and ``<a b>``. Coefficients follow from the
    generating function ``1 / Q(x, y)`` with a bilinear ``Q``.
    """
    m2 = abs(m) ** 2
    q00 = (1 + ns) * (1 + ni) - m2
    q10 = m2 - ns * (1 + ni)
    q01 = m2 - ni * (1 + ns)
    q11 = ns * ni - m2
    p = np.zeros((cutoff + 1, cutoff + 1))
    for k in range(cutoff + 1):
        for l in range(cutoff + 1):
            acc = 1.0 if (k == 0 and l == 0) else 0.0
            if k:
                acc -= q10 * p[k - 1, l]
            if l:
                acc -= q01 * p[k, l - 1]
            if k and l:
                acc -= q11 * p[k - 1, l - 1]
            p[k, l] = acc / q00
    return p


def heralded_metrics(moments, s_port, i_port, detection, cutoff=12, leakage_tol=1e-6):
    """Heralded signal ``g2`` and heralding efficiency for one port pair.

    The reduced two-mode state is expanded in Fock space and passed through
    the same click-detector model the Fock oracle uses.
    """
    ns, ni, m = reduced_two_mode(moments, s_port, i_port)
    p = gaussian_number_distribution(ns, ni, m, cutoff)
    leak = 1.0 - p.sum()
    if leak > leakage_tol:
        raise CutoffError(
            f"photon-number expansion misses {leak:.2e} of the norm at cutoff {cutoff}; "
            "increase the cutoff"
        )
    return fockcheck.heralded_from_distribution(p, detection)


def squeeze_param_from_heralding(g2_heralded, eta_H):
    """Squeezing parameter squared from heralded ``g2`` and heralding efficiency."""
    if not 0 < eta_H <= 1:
        raise ValueError(f"eta_H must lie in (0, 1], got {eta_H}")
    if g2_heralded < 0:
        raise ValueError(f"g2_heralded must be non-negative, got {g2_heralded}")
    # 1 - (1 - eta)^2 written as eta (2 - eta) to avoid cancellation at small eta
    return g2_heralded / (2.0 * (2.0 - eta_H))


def effective_lambda(moments, s_port, i_port):
    """``(lambda, purity)`` of the TMSV matching the reduced photon number.

    ``lambda^2 = mu / (1 + mu)`` with ``mu`` the geometric mean of the two
    photon numbers. ``purity = |m|^2 / (n_s (1 + n_i))`` is 1 for a pure TMSV
    and drops as the reduced state mixes.
    """
    ns, ni, m = reduced_two_mode(moments, s_port, i_port)
    mu = math.sqrt(max(ns, 0.0) * max(ni, 0.0))
    lam = math.sqrt(mu / (1.0 + mu))
    purity = abs(m) ** 2 / (ns * (1.0 + ni)) if ns > 0 else float("nan")
    return lam, purity


def correlation_report(moments, port, z, detection, cutoff=12):
    """All per-cell metrics for pump, signal and idler collected at ``port``."""
    seen = detect(moments, detection)
    g2 = g2_cross(seen, port, port)
    g2_h, eta_h = heralded_metrics(moments, port, port, detection, cutoff=cutoff)
    lam, purity = effective_lambda(moments, port, port)
    mu = float(moments.N_s[port - 1, port - 1].real)
    return CorrelationReport(
        port=port,
        z=float(z),
        g2_cross=g2,
        g2_heralded=g2_h,
        eta_H=eta_h,
        lambda_sq=squeeze_param_from_heralding(g2_h, eta_h),
        mean_photon_number=mu,
        lambda_eff=lam,
        pairing_purity=purity,
    )
