"""Port x distance study of the lattice source."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import counting, squeezer
from .config import ExperimentConfig
from .errors import TopsqueezeError
from .lattice import (
    CouplingModel,
    WaveguideGeometry,
    assemble_hamiltonian,
    interface_geometry,
    lattice_from_geometry,
)
from .moments import DetectionModel
from .propagation import evolve, localization_metrics
from .spectral import eigendecompose, find_gap_modes, ldos

BANDS = ("pump", "signal", "idler")


@dataclass
class SweepResult:
    config: ExperimentConfig
    lattices: dict
    spectrum: object
    gap_modes: list
    ldos_gap: object
    intensity_maps: dict = field(default_factory=dict)
    localization: dict = field(default_factory=dict)
    reports: list = field(default_factory=list)
    symplectic_residuals: dict = field(default_factory=dict)

    def report(self, port, z):
        for r in self.reports:
            if r.port == port and abs(r.z - z) < 1e-9:
                return r
        raise KeyError((port, z))


def coupling_model(config):
    c = config.coupling
    return CouplingModel(c.J_ref, c.kappa, c.l_ref, dict(c.wavelength_scale))


def geometry(config):
    g = config.geometry
    if g.spacings_um is not None:
        return WaveguideGeometry(g.site_count, tuple(g.spacings_um), g.length_mm)
    return interface_geometry(g.site_count, g.defect_site, g.short_um, g.long_um, g.length_mm)


def build_lattices(config):
    """LatticeSpec for each band (pump, signal, idler)."""
    geo = geometry(config)
    model = coupling_model(config)
    return {
        tag: lattice_from_geometry(geo, model, tag, config.geometry.defect_site) for tag in BANDS
    }


def detection_model(config):
    d = config.detection
    return DetectionModel(d.eta_s, d.eta_i, d.dark_counts)


def emulation(config):
    c = config.counting
    return counting.CountingEmulation(c.integration_time_s, c.trials, c.rep_rate_hz)


def z_grid(config):
    step = config.source.z_step_mm
    n = int(round(max(config.z_list) / step))
    return np.arange(n + 1) * step


def derived_parameters(config, lattices=None):
    lattices = lattices or build_lattices(config)
    out = {}
    for tag, spec in lattices.items():
        out[tag] = {
            "J_weak_per_mm": min(spec.bonds),
            "J_strong_per_mm": max(spec.bonds),
            "pattern": spec.pattern,
            "bonds_per_mm": list(spec.bonds),
        }
    return out


def _seed_for(config, port_index, z_index):
    return np.random.SeedSequence([config.seed, port_index, z_index])


def run_port(config, port, lattices=None, with_counts=True):
    """All distances for one injection port. Returns (reports, residuals)."""
    lattices = lattices or build_lattices(config)
    hams = {tag: assemble_hamiltonian(spec) for tag, spec in lattices.items()}
    det = detection_model(config)
    src = config.source
    try:
        pump = squeezer.pump_profile(hams["pump"], port, z_grid(config), src.pump_power_w)
        maps = squeezer.propagate_bogoliubov_checkpoints(
            hams["signal"], hams["idler"], pump, src.gamma, config.z_list
        )
    except TopsqueezeError as exc:
        raise type(exc)(f"port {port}: {exc}") from exc
    reports, residuals = [], {}
    p_idx = config.ports.index(port) if port in config.ports else port
    for z_idx, z in enumerate(config.z_list):
        bmap = maps[float(z)]
        residuals[(port, z)] = bmap.symplectic_residual()
        try:
            mom = squeezer.moments_from_bogoliubov(bmap)
            rep = squeezer.correlation_report(mom, port, z, det, cutoff=src.fock_cutoff)
            if with_counts:
                seen = squeezer.detect(mom, det)
                rates = counting.rates_for(
                    rep,
                    float(seen.N_s[port - 1, port - 1].real),
                    float(seen.N_i[port - 1, port - 1].real),
                )
                rng = np.random.default_rng(_seed_for(config, p_idx, z_idx))
                rep = counting.emulate_counts(rep, rates, emulation(config), rng)
        except TopsqueezeError as exc:
            raise type(exc)(f"port {port}, z {z} mm: {exc}") from exc
        reports.append(rep)
    return reports, residuals


def spectral_artifacts(config, lattices=None):
    lattices = lattices or build_lattices(config)
    pump = lattices["pump"]
    spectrum = eigendecompose(assemble_hamiltonian(pump))
    j_strong = max(pump.bonds)
    gap = find_gap_modes(spectrum, j_strong, config.analysis.zero_window)
    profile = ldos(spectrum, 0.0, config.analysis.ldos_broadening * j_strong, modes=gap or None)
    return spectrum, gap, profile


def propagation_artifacts(config, lattices=None, ports=None):
    lattices = lattices or build_lattices(config)
    h = assemble_hamiltonian(lattices["pump"])
    spectrum = eigendecompose(h)
    grid = z_grid(config)
    maps, metrics = {}, {}
    for port in ports or config.ports:
        maps[port] = evolve(h, port, grid, spectrum)
        metrics[port] = localization_metrics(maps[port], port)
    return maps, metrics


def run_sweep(config, with_counts=True):
    """Full study: spectrum, pump maps and one report per (port, z)."""
    config.validate()
    lattices = build_lattices(config)
    spectrum, gap, profile = spectral_artifacts(config, lattices)
    maps, metrics = propagation_artifacts(config, lattices)
    result = SweepResult(config, lattices, spectrum, gap, profile, maps, metrics)

    def job(port):
        return run_port(config, port, lattices, with_counts)

    if config.workers > 1:
        with ThreadPoolExecutor(max_workers=config.workers) as pool:
            outputs = list(pool.map(job, config.ports))
    else:
        outputs = [job(p) for p in config.ports]
    for reports, residuals in outputs:
        result.reports.extend(reports)
        result.symplectic_residuals.update(residuals)
    return result
