import json

import pytest

from topsqueeze import cli, export
from topsqueeze.config import ExperimentConfig
from topsqueeze.sweep import run_sweep


@pytest.fixture(scope="module")
def default_result():
    return run_sweep(ExperimentConfig())


def test_default_sweep_has_21_reports(default_result):
    assert len(default_result.reports) == 21
    assert {(r.port, r.z) for r in default_result.reports} == {
        (p, z) for p in (1, 10, 20) for z in (5.0, 10.0, 15.0, 20.0, 25.0, 30.0, 35.0)
    }
    assert max(default_result.symplectic_residuals.values()) < 1e-8


def test_single_cell():
    cfg = ExperimentConfig(ports=[1], z_list=[5.0])
    assert len(run_sweep(cfg).reports) == 1


def test_parallel_matches_serial():
    a = run_sweep(ExperimentConfig(ports=[1, 20], z_list=[5.0, 10.0], workers=1))
    b = run_sweep(ExperimentConfig(ports=[1, 20], z_list=[5.0, 10.0], workers=2))
    assert [r.uncertainty for r in a.reports] == [r.uncertainty for r in b.reports]


def test_export_is_deterministic(default_result, tmp_path):
    files_a = export.export_sweep(default_result, tmp_path / "a", ("csv", "json", "svg"), {"seed": 0})
    files_b = export.export_sweep(default_result, tmp_path / "b", ("csv", "json", "svg"), {"seed": 0})
    for fa, fb in zip(files_a, files_b):
        assert fa.read_bytes() == fb.read_bytes(), fa.name


def test_csv_schemas(default_result, tmp_path):
    export.export_sweep(default_result, tmp_path, ("csv",), {})
    assert (tmp_path / "intensity_port1.csv").read_text().splitlines()[0] == "z_mm,site,intensity"
    lines = (tmp_path / "correlations.csv").read_text().splitlines()
    assert lines[0] == "port,z_mm,g2_cross,g2_heralded,eta_H,lambda_sq,mean_n"
    assert len(lines) == 22
    assert (tmp_path / "spectrum.csv").read_text().startswith("mode,eigenvalue_per_mm\n")


def test_svg_embeds_data(default_result, tmp_path):
    export.export_sweep(default_result, tmp_path, ("svg",), {})
    text = (tmp_path / "g2_vs_z.svg").read_text()
    assert "port,z_mm,g2_cross" in text and "<svg" in text


def test_fmt():
    assert export.fmt(0.1) == "0.1"
    assert export.fmt(-0.0) == "0"
    assert export.fmt(float("nan")) == "nan"
    assert export.fmt(3) == "3"
    with pytest.raises(ValueError):
        export.parse_formats("csv,png")


def test_cli_squeeze_and_json(tmp_path, capsys):
    code = cli.main(["squeeze", "--port", "10", "--z-mm", "20", "--out", str(tmp_path), "--seed", "5"])
    assert code == cli.EXIT_OK
    doc = json.loads((tmp_path / "squeeze.json").read_text())
    assert doc["manifest"]["config"]["seed"] == 5
    assert doc["reports"][0]["port"] == 10


def test_cli_spectrum_and_phase_match(tmp_path, capsys):
    assert cli.main(["spectrum", "--out", str(tmp_path), "--formats", "csv,json"]) == 0
    assert cli.main(["phase-match", "--out", str(tmp_path), "--formats", "json"]) == 0
    pm = json.loads((tmp_path / "phase_match.json").read_text())
    assert pm["signal_nm"] == pytest.approx(718.5, abs=0.5)
    out = capsys.readouterr().out
    assert "Zak phase (topological): 3.141593" in out


def test_cli_exit_codes(tmp_path, capsys):
    assert cli.main(["sweep", "--ports", "30", "--out", str(tmp_path)]) == cli.EXIT_CONFIG
    assert cli.main(["sweep", "--config", str(tmp_path / "none.toml")]) == cli.EXIT_CONFIG
    assert cli.main(["phase-match", "--delta-n", "0.5", "--out", str(tmp_path)]) == cli.EXIT_NUMERICAL
    blocker = tmp_path / "file"
    blocker.write_text("x")
    assert cli.main(["spectrum", "--out", str(blocker / "sub")]) == cli.EXIT_IO


def test_cli_sweep_determinism(tmp_path, capsys):
    for d in ("a", "b"):
        assert cli.main(["sweep", "--out", str(tmp_path / d), "--seed", "11", "--formats", "csv"]) == 0
    for f in sorted((tmp_path / "a").glob("*.csv")):
        assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes()
