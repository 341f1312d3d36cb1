"""Command-line entry point: ``topsqueeze <subcommand> [options]``.

Exit codes: 0 success, 2 configuration error, 3 numerical error, 4 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from . import export, oracles, sweep
from .config import load_config, manifest
from .errors import ConfigError, NumericalError
from .lattice import assemble_hamiltonian
from .phasematch import PhaseMatchingProblem, omega_from_wavelength, solve_phase_matching
from .propagation import evolve, localization_metrics
from .spectral import eigendecompose, zak_phase

EXIT_OK, EXIT_CONFIG, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4

log = logging.getLogger("topsqueeze")


def _config(args):
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg.seed = args.seed
    if args.out is not None:
        cfg.output_dir = args.out
    if getattr(args, "ports", None):
        cfg.ports = args.ports
    if getattr(args, "z", None):
        cfg.z_list = sorted(args.z)
    if getattr(args, "workers", None):
        cfg.workers = args.workers
    return cfg.validate()


def _zak(cfg, pump):
    weak, strong = min(pump.bonds), max(pump.bonds)
    k = cfg.analysis.k_samples
    return {"topological": zak_phase(weak, strong, k), "trivial": zak_phase(strong, weak, k)}


def cmd_spectrum(args):
    cfg = _config(args)
    lattices = sweep.build_lattices(cfg)
    spectrum, gap, profile = sweep.spectral_artifacts(cfg, lattices)
    zak = _zak(cfg, lattices["pump"])
    out = Path(cfg.output_dir)
    print(f"gap modes (0-based): {gap}")
    for k in gap:
        print(f"  E[{k}] = {spectrum.eigenvalues[k]:+.3e} /mm")
    for name, z in zak.items():
        print(f"Zak phase ({name}): {z.phase:.6f} rad")
    if "csv" in args.formats:
        export.write_spectrum_csv(out / "spectrum.csv", spectrum)
        export.write_ldos_csv(out / "ldos.csv", profile)
    if "json" in args.formats:
        export.write_json(
            out / "spectrum.json",
            {
                "manifest": manifest(cfg, sweep.derived_parameters(cfg, lattices)),
                "eigenvalues_per_mm": spectrum.eigenvalues,
                "gap_modes": gap,
                "ldos_gap": profile.values,
                "zak_phase": {n: {"phase": z.phase, "converged": z.converged} for n, z in zak.items()},
            },
        )
    if "svg" in args.formats:
        export.band_svg(out / "bands.svg", spectrum, gap)
        export.ldos_svg(out / "ldos.svg", profile)
    return EXIT_OK


def cmd_propagate(args):
    cfg = _config(args)
    lattices = sweep.build_lattices(cfg)
    h = assemble_hamiltonian(lattices["pump"])
    spectrum = eigendecompose(h)
    grid = sweep.z_grid(cfg)
    out = Path(cfg.output_dir)
    metrics = {}
    for port in cfg.ports:
        imap = evolve(h, port, grid, spectrum)
        m = localization_metrics(imap, port)
        metrics[port] = m
        print(
            f"port {port:2d}: return {m.return_probability:.3f}  IPR {m.ipr:.3f}  "
            f"spread {m.spread:.2f} sites at z = {grid[-1]:g} mm"
        )
        if "csv" in args.formats:
            export.write_intensity_csv(out / f"intensity_port{port}.csv", imap)
        if "svg" in args.formats:
            export.heatmap_svg(out / f"intensity_port{port}.svg", imap, f"port {port}")
    if "json" in args.formats:
        export.write_json(
            out / "propagation.json",
            {
                "manifest": manifest(cfg, sweep.derived_parameters(cfg, lattices)),
                "localization": {p: vars(m) for p, m in metrics.items()},
            },
        )
    return EXIT_OK


def _print_reports(reports):
    print("port  z_mm     g2_cross   g2_her    eta_H   lambda_sq   lambda   mean_n")
    for r in sorted(reports, key=lambda r: (r.port, r.z)):
        err = r.uncertainty.get("g2_cross", (float("nan"),) * 2)[1] if r.uncertainty else float("nan")
        print(
            f"{r.port:4d} {r.z:5.1f} {r.g2_cross:8.2f}±{err:<6.2f} {r.g2_heralded:8.4f} "
            f"{r.eta_H:8.4f} {r.lambda_sq:10.3e} {r.lambda_eff:8.4f} {r.mean_photon_number:9.3e}"
        )


def cmd_squeeze(args):
    cfg = _config(args)
    cfg.ports = [args.port]
    cfg.z_list = [args.z_mm]
    cfg.validate()
    reports, residuals = sweep.run_port(cfg, args.port)
    _print_reports(reports)
    print(f"symplectic residual {max(residuals.values()):.2e}")
    out = Path(cfg.output_dir)
    if "csv" in args.formats:
        export.write_reports_csv(out / "correlations.csv", reports)
    if "json" in args.formats:
        export.write_json(
            out / "squeeze.json",
            {
                "manifest": manifest(cfg, sweep.derived_parameters(cfg)),
                "reports": [export.report_record(r) for r in reports],
                "max_symplectic_residual": max(residuals.values()),
            },
        )
    return EXIT_OK


def cmd_sweep(args):
    cfg = _config(args)
    result = sweep.run_sweep(cfg)
    _print_reports(result.reports)
    doc = manifest(cfg, sweep.derived_parameters(cfg, result.lattices))
    written = export.export_sweep(result, cfg.output_dir, args.formats, doc)
    print(f"wrote {len(written)} files to {cfg.output_dir}")
    return EXIT_OK


def cmd_oracle_check(args):
    ok = True
    rows = []
    for sites in (1, 2):
        for gain in oracles.GAIN_LEVELS:
            c = oracles.compare_gaussian_fock(sites, gain, cutoff=args.cutoff)
            err = c.worst_relative_error
            good = err < 0.01
            ok &= good
            rows.append({"sites": sites, "gain": gain, "worst_relative_error": err, "pass": good})
            print(f"{'PASS' if good else 'FAIL'} gaussian-vs-fock sites={sites} gain={gain}: {err:.2e}")
    for rt in oracles.heralded_table(cutoff=max(args.cutoff, 12)):
        good = abs(rt.relative_error) <= 0.05
        ok &= good
        rows.append(
            {"lambda": rt.lam, "eta": rt.eta, "lambda_sq": rt.lambda_sq, "relative_error": rt.relative_error, "pass": good}
        )
        print(
            f"{'PASS' if good else 'FAIL'} heralded round trip lambda={rt.lam} eta={rt.eta}: "
            f"lambda^2 {rt.lambda_sq:.5f} vs {rt.lam**2:.5f} ({100 * rt.relative_error:+.2f}%)"
        )
    if "json" in args.formats:
        out = Path(args.out or "out")
        export.write_json(out / "oracle_check.json", {"checks": rows, "all_pass": ok})
    return EXIT_OK if ok else EXIT_NUMERICAL


def cmd_phase_match(args):
    cfg = _config(args)
    pump_nm = args.pump_nm if args.pump_nm is not None else cfg.source.pump_wavelength_nm
    dn = args.delta_n if args.delta_n is not None else cfg.source.delta_n
    problem = PhaseMatchingProblem(omega_from_wavelength(pump_nm), delta_n=dn)
    sol = solve_phase_matching(problem)
    print(
        f"pump {pump_nm:g} nm, delta_n {dn:g}: signal {sol.wavelength_s_nm:.2f} nm, "
        f"idler {sol.wavelength_i_nm:.2f} nm, |dk| {abs(sol.residual):.2e} /m"
    )
    if "json" in args.formats:
        export.write_json(
            Path(cfg.output_dir) / "phase_match.json",
            {
                "pump_nm": pump_nm,
                "delta_n": dn,
                "signal_nm": sol.wavelength_s_nm,
                "idler_nm": sol.wavelength_i_nm,
                "detuning_rad_per_s": sol.detuning,
                "residual_per_m": sol.residual,
                "seed": cfg.seed,
            },
        )
    return EXIT_OK


def _u64(text):
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="TOML configuration file")
    common.add_argument("--out", help="output directory")
    common.add_argument("--seed", type=_u64, help="random seed (unsigned 64-bit)")
    common.add_argument("--formats", default="csv,json,svg", help="comma list of csv,json,svg")
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="topsqueeze", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("spectrum", parents=[common], help="eigenvalues, zero-energy LDOS, Zak phases")
    p.set_defaults(func=cmd_spectrum)

    p = sub.add_parser("propagate", parents=[common], help="single-site pump propagation maps")
    p.add_argument("--ports", type=int, nargs="+", help="input sites (1-based)")
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("squeeze", parents=[common], help="one (port, z) pair-generation run")
    p.add_argument("--port", type=int, default=1)
    p.add_argument("--z-mm", type=float, default=35.0)
    p.set_defaults(func=cmd_squeeze)

    p = sub.add_parser("sweep", parents=[common], help="ports x distances study")
    p.add_argument("--ports", type=int, nargs="+")
    p.add_argument("--z", type=float, nargs="+", help="distances in mm")
    p.add_argument("--workers", type=int)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("oracle-check", parents=[common], help="Gaussian-vs-Fock and heralding checks")
    p.add_argument("--cutoff", type=int, default=8)
    p.set_defaults(func=cmd_oracle_check)

    p = sub.add_parser("phase-match", parents=[common], help="signal/idler wavelengths")
    p.add_argument("--pump-nm", type=float)
    p.add_argument("--delta-n", type=float)
    p.set_defaults(func=cmd_phase_match)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        args.formats = export.parse_formats(args.formats)
        return args.func(args)
    except (ConfigError, ValueError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
