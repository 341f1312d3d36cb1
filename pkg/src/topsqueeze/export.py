"""Tables, a JSON results document and SVG figures for one run directory.

Floats are written with a fixed ``%.12g`` format so identical artifacts give
byte-identical files. SVGs carry no timestamp and a fixed element-id salt.
"""

from __future__ import annotations

import csv
import json
import math
from pathlib import Path

import numpy as np

FORMATS = ("csv", "json", "svg")

INTENSITY_HEADER = ("z_mm", "site", "intensity")
REPORT_HEADER = ("port", "z_mm", "g2_cross", "g2_heralded", "eta_H", "lambda_sq", "mean_n")
SPECTRUM_HEADER = ("mode", "eigenvalue_per_mm")
LDOS_HEADER = ("site", "ldos")


class ExportError(OSError):
    """An output file could not be written; ``path`` names it."""

    def __init__(self, path, cause):
        super().__init__(f"cannot write {path}: {cause}")
        self.path = Path(path)


def fmt(x):
    if isinstance(x, (int, np.integer)) and not isinstance(x, bool):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    if math.isinf(x):
        return "inf" if x > 0 else "-inf"
    out = "%.12g" % x
    return "0" if out == "-0" else out


def parse_formats(text):
    items = [s.strip() for s in text.split(",") if s.strip()]
    bad = [s for s in items if s not in FORMATS]
    if bad or not items:
        raise ValueError(f"unknown format(s) {bad or text!r}; choose from {', '.join(FORMATS)}")
    return tuple(items)


def _write_rows(path, header, rows):
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", newline="") as fh:
            w = csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            for row in rows:
                w.writerow([fmt(v) for v in row])
    except OSError as exc:
        raise ExportError(path, exc) from exc
    return path


def intensity_rows(imap):
    for k, z in enumerate(imap.z_grid):
        for n, value in enumerate(imap.intensities[k], start=1):
            yield (float(z), n, value)


def report_rows(reports):
    for r in sorted(reports, key=lambda r: (r.port, r.z)):
        yield (r.port, r.z, r.g2_cross, r.g2_heralded, r.eta_H, r.lambda_sq, r.mean_photon_number)


def write_intensity_csv(path, imap):
    return _write_rows(Path(path), INTENSITY_HEADER, intensity_rows(imap))


def write_reports_csv(path, reports):
    return _write_rows(Path(path), REPORT_HEADER, report_rows(reports))


def write_spectrum_csv(path, spectrum):
    rows = ((k, e) for k, e in enumerate(spectrum.eigenvalues, start=1))
    return _write_rows(Path(path), SPECTRUM_HEADER, rows)


def write_ldos_csv(path, profile):
    rows = ((n, v) for n, v in enumerate(profile.values, start=1))
    return _write_rows(Path(path), LDOS_HEADER, rows)


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def report_record(r):
    out = {
        "port": r.port,
        "z_mm": r.z,
        "g2_cross": r.g2_cross,
        "g2_heralded": r.g2_heralded,
        "eta_H": r.eta_H,
        "lambda_sq": r.lambda_sq,
        "mean_n": r.mean_photon_number,
        "lambda_eff": r.lambda_eff,
        "pairing_purity": r.pairing_purity,
        "nonclassical": r.nonclassical,
        "bell_capable": r.bell_capable,
    }
    if r.uncertainty:
        out["uncertainty"] = r.uncertainty
    return out


def write_json(path, document):
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w") as fh:
            json.dump(_jsonable(document), fh, indent=2, sort_keys=True)
            fh.write("\n")
    except OSError as exc:
        raise ExportError(path, exc) from exc
    return path


# ---------------------------------------------------------------- figures


def _pyplot():
    import matplotlib

    matplotlib.use("Agg")
    matplotlib.rcParams["svg.hashsalt"] = "topsqueeze"
    import matplotlib.pyplot as plt

    return plt


def _save_svg(fig, path, comment):
    path = Path(path)
    plt = _pyplot()
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        fig.savefig(path, format="svg", metadata={"Date": None})
        text = path.read_text()
        safe = comment.replace("--", "- -")
        head, sep, rest = text.partition("<svg")
        path.write_text(f"{head}<!--\n{safe}\n-->\n{sep}{rest}")
    except OSError as exc:
        raise ExportError(path, exc) from exc
    finally:
        plt.close(fig)
    return path


def _rows_comment(header, rows):
    lines = [",".join(header)]
    lines += [",".join(fmt(v) for v in row) for row in rows]
    return "\n".join(lines)


def heatmap_svg(path, imap, title=""):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    data = imap.peak_normalized()
    n = data.shape[1]
    ax.imshow(
        data,
        origin="lower",
        aspect="auto",
        cmap="magma",
        extent=(0.5, n + 0.5, imap.z_grid[0], imap.z_grid[-1]),
    )
    ax.set_xlabel("site")
    ax.set_ylabel("z (mm)")
    ax.set_title(title)
    fig.tight_layout()
    return _save_svg(fig, path, _rows_comment(INTENSITY_HEADER, intensity_rows(imap)))


def band_svg(path, spectrum, gap_modes=()):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4, 3))
    idx = np.arange(1, spectrum.eigenvalues.size + 1)
    ax.plot(idx, spectrum.eigenvalues, "o", color="0.4", ms=4)
    if len(gap_modes):
        g = np.asarray(gap_modes)
        ax.plot(g + 1, spectrum.eigenvalues[g], "o", color="crimson", ms=5)
    ax.set_xlabel("mode index")
    ax.set_ylabel("E (1/mm)")
    fig.tight_layout()
    rows = ((k, e) for k, e in enumerate(spectrum.eigenvalues, start=1))
    return _save_svg(fig, path, _rows_comment(SPECTRUM_HEADER, rows))


def ldos_svg(path, profile):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4, 3))
    sites = np.arange(1, profile.values.size + 1)
    ax.bar(sites, profile.values, color="steelblue")
    ax.set_xlabel("site")
    ax.set_ylabel("LDOS at E = 0")
    fig.tight_layout()
    rows = ((n, v) for n, v in zip(sites, profile.values))
    return _save_svg(fig, path, _rows_comment(LDOS_HEADER, rows))


def g2_svg(path, reports):
    plt = _pyplot()
    fig, ax = plt.subplots(figsize=(4.5, 3.2))
    for port in sorted({r.port for r in reports}):
        rs = sorted((r for r in reports if r.port == port), key=lambda r: r.z)
        z = [r.z for r in rs]
        g2 = [r.g2_cross for r in rs]
        err = [r.uncertainty.get("g2_cross", (0, 0))[1] if r.uncertainty else 0 for r in rs]
        ax.errorbar(z, g2, yerr=err, marker="o", capsize=2, label=f"port {port}")
    ax.axhline(2.0, color="0.6", lw=0.8, ls="--")
    ax.set_yscale("log")
    ax.set_xlabel("z (mm)")
    ax.set_ylabel("g2 signal-idler")
    ax.legend(frameon=False)
    fig.tight_layout()
    return _save_svg(fig, path, _rows_comment(REPORT_HEADER, report_rows(reports)))


# ---------------------------------------------------------------- runs


def export_sweep(result, out_dir, formats, manifest):
    """Write every artifact of a sweep. Returns the list of paths written."""
    out = Path(out_dir)
    written = []
    if "csv" in formats:
        written.append(write_spectrum_csv(out / "spectrum.csv", result.spectrum))
        written.append(write_ldos_csv(out / "ldos.csv", result.ldos_gap))
        for port, imap in sorted(result.intensity_maps.items()):
            written.append(write_intensity_csv(out / f"intensity_port{port}.csv", imap))
        written.append(write_reports_csv(out / "correlations.csv", result.reports))
    if "json" in formats:
        doc = {
            "manifest": manifest,
            "gap_modes": list(result.gap_modes),
            "eigenvalues_per_mm": result.spectrum.eigenvalues,
            "localization": {
                p: {"return_probability": m.return_probability, "ipr": m.ipr, "spread": m.spread}
                for p, m in sorted(result.localization.items())
            },
            "reports": [report_record(r) for r in sorted(result.reports, key=lambda r: (r.port, r.z))],
            "max_symplectic_residual": max(result.symplectic_residuals.values(), default=0.0),
        }
        written.append(write_json(out / "results.json", doc))
    if "svg" in formats:
        written.append(band_svg(out / "bands.svg", result.spectrum, result.gap_modes))
        written.append(ldos_svg(out / "ldos.svg", result.ldos_gap))
        for port, imap in sorted(result.intensity_maps.items()):
            written.append(heatmap_svg(out / f"intensity_port{port}.svg", imap, f"port {port}"))
        written.append(g2_svg(out / "g2_vs_z.svg", result.reports))
    return written
