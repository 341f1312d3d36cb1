"""Acceptance criteria, one test each.

Every test records a one-line PASS/FAIL verdict with the measured numbers;
the lines are printed in the pytest terminal summary and also when this file
is run directly (``python tests/test_acceptance.py``).
"""

import math
import time

import numpy as np
import pytest

from topsqueeze import export, fockcheck, oracles, squeezer
from topsqueeze.config import ExperimentConfig
from topsqueeze.lattice import assemble_hamiltonian
from topsqueeze.moments import DetectionModel, MomentSet
from topsqueeze.phasematch import PhaseMatchingProblem, omega_from_wavelength, solve_phase_matching
from topsqueeze.propagation import evolve, localization_metrics
from topsqueeze.spectral import circular_distance, eigendecompose, find_gap_modes, ldos, zak_phase
from topsqueeze.sweep import build_lattices, run_sweep, z_grid

RESULTS = []

ZERO_WINDOW = 0.05
LDOS_SITE20_FRACTION = 0.10
RETURN_MIN = 0.5
SPREAD_FACTOR = 2.0
UNITARITY_TOL = 1e-9
SYMPLECTIC_MAX = 1e-8
ORACLE_REL = 0.01
CUTOFF_SHIFT = 1e-4
TMSV_TOL = 1e-6
LOSS_TOL = 1e-6
ESTIMATOR_REL = 0.05
ANCHOR_TOL = 1e-9
G2_RATIO_35 = 3.0
ZAK_TOL = 1e-6 * 2 * math.pi
PM_REL = 1e-12
SLOPE, SLOPE_TOL = 2.0, 0.01


def verdict(number, name, ok, detail):
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d} {name}: {detail}"
    RESULTS.append(line)
    print(line)
    assert ok, line


@pytest.fixture(scope="module")
def cfg():
    return ExperimentConfig().validate()


@pytest.fixture(scope="module")
def sweep_result(cfg):
    t0 = time.perf_counter()
    result = run_sweep(cfg)
    return result, time.perf_counter() - t0


def test_criterion_01_spectrum_structure(cfg):
    t0 = time.perf_counter()
    pump = build_lattices(cfg)["pump"]
    s = eigendecompose(assemble_hamiltonian(pump))
    j = max(pump.bonds)
    gap = find_gap_modes(s, j, ZERO_WINDOW)
    lower = int(np.sum(s.eigenvalues <= -ZERO_WINDOW * j))
    upper = int(np.sum(s.eigenvalues >= ZERO_WINDOW * j))
    dt = time.perf_counter() - t0
    ok = len(gap) == 2 and lower == 9 and upper == 9 and dt < 1.0
    verdict(1, "spectrum structure", ok, f"{len(gap)} gap modes, bands {lower}+{upper}, {dt:.3f} s")


def test_criterion_02_ldos_localization(cfg):
    t0 = time.perf_counter()
    pump = build_lattices(cfg)["pump"]
    s = eigendecompose(assemble_hamiltonian(pump))
    j = max(pump.bonds)
    prof = ldos(s, 0.0, cfg.analysis.ldos_broadening * j, find_gap_modes(s, j, ZERO_WINDOW))
    v = prof.values
    top = sorted((np.argsort(v)[-2:] + 1).tolist())
    frac = v[19] / v.max()
    dt = time.perf_counter() - t0
    ok = top == [1, 10] and frac < LDOS_SITE20_FRACTION and dt < 1.0
    verdict(2, "gap-mode LDOS localization", ok, f"maxima at sites {top}, site 20 at {frac:.2e} of max, {dt:.3f} s")


def test_criterion_03_propagation_contrast(cfg):
    t0 = time.perf_counter()
    h = assemble_hamiltonian(build_lattices(cfg)["pump"])
    s = eigendecompose(h)
    m = {p: localization_metrics(evolve(h, p, z_grid(cfg), s), p) for p in (1, 10, 20)}
    dt = time.perf_counter() - t0
    ratio = m[20].spread / max(m[1].spread, m[10].spread)
    ok = (
        m[1].return_probability >= RETURN_MIN
        and m[10].return_probability >= RETURN_MIN
        and ratio >= SPREAD_FACTOR
        and dt < 5.0
    )
    verdict(
        3,
        "propagation contrast",
        ok,
        f"return {m[1].return_probability:.3f}/{m[10].return_probability:.3f}, "
        f"spread {m[1].spread:.2f}/{m[10].spread:.2f}/{m[20].spread:.2f} (x{ratio:.2f}), {dt:.3f} s",
    )


def test_criterion_04_unitarity(sweep_result):
    result, _ = sweep_result
    worst = max(np.abs(m.intensities.sum(axis=1) - 1).max() for m in result.intensity_maps.values())
    verdict(4, "unitarity", worst <= UNITARITY_TOL, f"worst row-sum error {worst:.2e}")


def test_criterion_05_symplectic(cfg, sweep_result):
    result, _ = sweep_result
    worst = max(result.symplectic_residuals.values())
    fine = ExperimentConfig()
    fine.source.z_step_mm = cfg.source.z_step_mm / 2
    worst_half = max(run_sweep(fine, with_counts=False).symplectic_residuals.values())
    ok = worst <= SYMPLECTIC_MAX and worst_half <= SYMPLECTIC_MAX and worst_half < 10 * worst
    verdict(5, "symplectic identity", ok, f"max residual {worst:.2e}, halved step {worst_half:.2e}")


def test_criterion_06_gaussian_vs_fock():
    t0 = time.perf_counter()
    worst_err, worst_shift = 0.0, 0.0
    for sites in (1, 2):
        for gain in oracles.GAIN_LEVELS:
            c8 = oracles.compare_gaussian_fock(sites, gain, cutoff=8)
            c12 = oracles.compare_gaussian_fock(sites, gain, cutoff=12)
            worst_err = max(worst_err, c8.worst_relative_error)
            worst_shift = max(
                worst_shift,
                np.abs(c12.fock_n - c8.fock_n).max(),
                np.abs(c12.fock_g2 - c8.fock_g2).max(),
            )
    dt = time.perf_counter() - t0
    ok = worst_err < ORACLE_REL and worst_shift < CUTOFF_SHIFT and dt < 60
    verdict(6, "Gaussian vs Fock", ok, f"worst rel. error {worst_err:.2e}, cutoff shift {worst_shift:.2e}, {dt:.1f} s")


def test_criterion_07_tmsv_closed_form():
    worst = 0.0
    for r in (0.1, 0.5, math.asinh(1.0)):
        z = np.linspace(0.0, 1.0, 11)
        pump = squeezer.constant_pump([math.sqrt(r)], z)
        bmap = squeezer.propagate_bogoliubov(np.zeros((1, 1)), np.zeros((1, 1)), pump, 1.0, 1.0)
        mom = squeezer.moments_from_bogoliubov(bmap)
        mu = math.sinh(r) ** 2
        worst = max(worst, abs(mom.N_s[0, 0].real - mu), abs(squeezer.g2_cross(mom, 1, 1) - (2 + 1 / mu)))
    state = fockcheck.tmsv_by_evolution(math.tanh(math.asinh(1.0)), 30)
    g2_mu1 = fockcheck.g2_cross_fock(state, 1, 1)
    ok = worst < TMSV_TOL and abs(g2_mu1 - 3.0) < TMSV_TOL
    verdict(7, "TMSV closed form", ok, f"worst deviation {worst:.2e}, Fock g2 at mu=1 {g2_mu1:.9f}")


def test_criterion_08_loss_invariance():
    rng = np.random.default_rng(2024)
    worst = 0.0
    for _ in range(100):
        n = int(rng.integers(1, 6))
        ns = rng.uniform(1e-4, 3.0, n)
        ni = rng.uniform(1e-4, 3.0, n)
        m = rng.uniform(0, 1, n) * np.sqrt(ns * (1 + ni)) * np.exp(2j * np.pi * rng.uniform(size=n))
        mom = MomentSet(np.diag(ns), np.diag(ni), np.diag(m))
        det = DetectionModel(rng.uniform(0.01, 1), rng.uniform(0.01, 1))
        lossy = squeezer.apply_loss(mom, det)
        for k in range(1, n + 1):
            a, b = squeezer.g2_cross(mom, k, k), squeezer.g2_cross(lossy, k, k)
            worst = max(worst, abs(a - b) / a)
    verdict(8, "loss invariance of g2", worst < LOSS_TOL, f"worst relative change {worst:.2e} over 100 sets")


def test_criterion_09_heralded_round_trip():
    table = oracles.heralded_table()
    misses = [rt for rt in table if abs(rt.relative_error) > ESTIMATOR_REL]
    anchor = max(
        max(abs(squeezer.squeeze_param_from_heralding(g, 1.0) - g / 2), abs(squeezer.squeeze_param_from_heralding(g, 1e-15) - g / 4))
        for g in np.linspace(0.0, 4.0, 41)
    )
    worst = max(table, key=lambda rt: abs(rt.relative_error))
    detail = (
        f"worst {100 * worst.relative_error:+.2f}% at lambda={worst.lam}, eta={worst.eta}; "
        f"{len(misses)}/{len(table)} cells outside 5%"
    )
    if misses:
        detail += " (" + ", ".join(f"l={rt.lam},eta={rt.eta}:{100 * rt.relative_error:+.2f}%" for rt in misses) + ")"
    detail += f"; anchors {anchor:.1e}"
    verdict(9, "heralded estimator round trip", not misses and anchor < ANCHOR_TOL, detail)


def test_criterion_10_port_ordering(sweep_result, cfg):
    result, dt = sweep_result
    bad = []
    info = []
    for z in cfg.z_list:
        r = {p: result.report(p, z) for p in (1, 10, 20)}
        for p in (1, 10):
            if not r[p].g2_cross > r[20].g2_cross:
                bad.append(f"g2 z={z:g} port {p}")
            if not r[p].lambda_eff > r[20].lambda_eff:
                bad.append(f"lambda z={z:g} port {p}")
            if not r[p].lambda_sq > r[20].lambda_sq:
                info.append(f"{z:g}")
    r35 = {p: result.report(p, 35.0).g2_cross for p in (1, 10, 20)}
    ratio = min(r35[1], r35[10]) / r35[20]
    ok = not bad and ratio >= G2_RATIO_35 and dt < 120
    note = f"; estimator lambda^2 ordering breaks at z={','.join(sorted(set(info), key=float))} mm" if info else ""
    verdict(
        10,
        "edge/defect ports outperform trivial port",
        ok,
        f"{len(bad)} ordering violations, g2 ratio at 35 mm {ratio:.1f}, sweep {dt:.1f} s{note}",
    )


def test_criterion_11_zak_phase():
    checks = []
    for scale in (1.0, 3.7):
        for k in (512, 1024):
            topo = zak_phase(0.0612 * scale, 0.25 * scale, k).phase
            triv = zak_phase(0.25 * scale, 0.0612 * scale, k).phase
            checks.append(max(circular_distance(topo, math.pi), circular_distance(triv, 0.0)))
    worst = max(checks)
    verdict(11, "Zak phases", worst < ZAK_TOL, f"worst distance from (pi, 0) {worst:.2e} rad")


def test_criterion_12_phase_matching():
    wp = omega_from_wavelength(780.0)
    degenerate = solve_phase_matching(PhaseMatchingProblem(wp, delta_n=0.0))
    dns = np.linspace(2e-5, 2e-4, 10)
    sols = [solve_phase_matching(PhaseMatchingProblem(wp, delta_n=d)) for d in dns]
    kp = PhaseMatchingProblem(wp).pump_wavevector()
    worst_res = max(abs(s.residual) for s in sols) / kp
    mono = bool(np.all(np.diff([s.detuning for s in sols]) > 0))
    ok = degenerate.detuning == 0.0 and mono and worst_res < PM_REL
    verdict(
        12,
        "phase matching",
        ok,
        f"degenerate at dn=0: {degenerate.detuning == 0.0}, monotone: {mono}, "
        f"worst |dk|/k_p {worst_res:.1e}",
    )


def test_criterion_13_pair_rate_scaling(cfg):
    lat = build_lattices(cfg)
    h = {t: assemble_hamiltonian(s) for t, s in lat.items()}
    powers = np.geomspace(0.1, 2.0, 6)
    mus = []
    for p in powers:
        pump = squeezer.pump_profile(h["pump"], 1, z_grid(cfg), p)
        bmap = squeezer.propagate_bogoliubov(h["signal"], h["idler"], pump, cfg.source.gamma, 35.0)
        mus.append(squeezer.moments_from_bogoliubov(bmap).N_s[0, 0].real)
    slope = np.polyfit(np.log(powers), np.log(mus), 1)[0]
    verdict(13, "pair-rate scaling", abs(slope - SLOPE) <= SLOPE_TOL, f"log-log slope {slope:.4f}")


def test_criterion_14_determinism(tmp_path):
    digests = []
    for d in ("a", "b"):
        cfg = ExperimentConfig(seed=77)
        written = export.export_sweep(run_sweep(cfg), tmp_path / d, ("csv",), {})
        digests.append({p.name: p.read_bytes() for p in written})
    same = digests[0] == digests[1]
    verdict(14, "determinism", same, f"{len(digests[0])} tables byte-identical: {same}")


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-q", "-s"]))
