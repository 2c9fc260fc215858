import json
import subprocess
import sys

import numpy as np
import pytest

from jcrabi.cli import main


def read_rows(path):
    meta, header, rows = [], None, []
    for line in path.read_text().splitlines():
        if line.startswith("#"):
            meta.append(line)
        elif header is None:
            header = line.split(",")
        else:
            rows.append([float(tok) for tok in line.split(",")])
    return meta, header, rows


class TestSpectrumCommand:
    def test_default_range_row_count_and_ground(self, tmp_path):
        rc = main([
            "spectrum", "--model", "jc", "--nmax", "40", "--levels", "5",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        meta, header, rows = read_rows(tmp_path / "spectrum_jc.csv")
        assert header[:2] == ["g", "E1"]
        assert len(rows) == 151  # g in [0, 1.5] step 0.01
        assert rows[0][0] == 0.0
        assert rows[0][1] == pytest.approx(-0.5, abs=1e-10)
        assert any("model" in line for line in meta)

    def test_byte_identical_rerun(self, tmp_path):
        args = ["spectrum", "--model", "rabi", "--nmax", "30", "--levels", "3",
                "--g-max", "0.2", "--out", str(tmp_path)]
        assert main(args) == 0
        first = (tmp_path / "spectrum_rabi.csv").read_bytes()
        assert main(args) == 0
        assert (tmp_path / "spectrum_rabi.csv").read_bytes() == first

    def test_both_models_with_overlay(self, tmp_path):
        rc = main([
            "spectrum", "--model", "both", "--nmax", "30", "--levels", "3",
            "--g-max", "0.3", "--g-step", "0.1", "--svg", "--out", str(tmp_path),
        ])
        assert rc == 0
        assert (tmp_path / "spectrum_jc.csv").exists()
        assert (tmp_path / "spectrum_rabi.csv").exists()
        svg = (tmp_path / "spectrum_overlay.svg").read_text()
        assert svg.startswith("<svg") and "polyline" in svg

    def test_bloch_siegert_visible_between_files(self, tmp_path):
        rc = main([
            "spectrum", "--model", "both", "--nmax", "120", "--levels", "3",
            "--g-min", "0.1", "--g-max", "0.1", "--g-step", "0.1",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        _, _, jc = read_rows(tmp_path / "spectrum_jc.csv")
        _, _, rb = read_rows(tmp_path / "spectrum_rabi.csv")
        rel = abs((rb[0][2] - rb[0][1]) - (jc[0][2] - jc[0][1])) / abs(jc[0][2] - jc[0][1])
        assert 1e-4 <= rel <= 3e-3


class TestBerryCommand:
    def test_summary_and_curve(self, tmp_path):
        rc = main([
            "berry", "--model", "jc", "--g", "0.1", "--nmax", "30",
            "--phi-nodes", "128", "--out", str(tmp_path),
        ])
        assert rc == 0
        meta, header, rows = read_rows(tmp_path / "berry_curve.csv")
        assert header == ["phi", "partial_phase"]
        assert len(rows) == 129  # phi_nodes + 1
        summary = json.loads((tmp_path / "berry_summary.json").read_text())
        for key in ("wilson_gamma", "connection_gamma", "generator_gamma",
                    "residual", "gauge"):
            assert key in summary
        # resonant JC level 1: all three estimators sit at pi
        assert summary["wilson_gamma"] == pytest.approx(np.pi, abs=5e-3)
        assert summary["connection_gamma"] == pytest.approx(np.pi, abs=5e-3)
        assert summary["generator_gamma"] == pytest.approx(np.pi, abs=5e-3)
        assert summary["config"]["model"] == "jc"

    def test_multiple_couplings(self, tmp_path):
        rc = main([
            "berry", "--model", "rabi", "--g", "0.01", "--g", "0.1",
            "--nmax", "30", "--phi-nodes", "64", "--out", str(tmp_path),
        ])
        assert rc == 0
        summary = json.loads((tmp_path / "berry_summary.json").read_text())
        assert len(summary["runs"]) == 2
        curves = sorted(p.name for p in tmp_path.glob("berry_curve_g*.csv"))
        assert len(curves) == 2

    def test_degenerate_level_exits_numerical(self, tmp_path):
        rc = main([
            "berry", "--model", "jc", "--g", "1.0", "--nmax", "30",
            "--phi-nodes", "64", "--out", str(tmp_path),
        ])
        assert rc == 2


class TestSurfacesCommand:
    def test_jc_conical_intersection_report(self, tmp_path):
        rc = main([
            "surfaces", "--model", "jc", "--g", "1.0", "--resolution", "41",
            "--out", str(tmp_path),
        ])
        assert rc == 0
        report = json.loads((tmp_path / "degeneracy_jc.json").read_text())
        assert report["locus"] == "point"
        assert report["min_gap"] == pytest.approx(0.0, abs=1e-12)

    def test_rabi_seam_report_and_heatmap(self, tmp_path):
        rc = main([
            "surfaces", "--model", "rabi", "--g", "1.0", "--resolution", "41",
            "--svg", "--out", str(tmp_path),
        ])
        assert rc == 0
        report = json.loads((tmp_path / "degeneracy_rabi.json").read_text())
        assert report["locus"] == "line"
        assert report["min_gap"] == pytest.approx(1.0, abs=1e-9)
        assert (tmp_path / "surface_gap_rabi.svg").exists()

    def test_small_grid_row_count(self, tmp_path):
        rc = main([
            "surfaces", "--model", "jc", "--resolution", "2", "--out", str(tmp_path),
        ])
        assert rc == 0
        _, _, rows = read_rows(tmp_path / "surface_jc.csv")
        assert len(rows) == 4


class TestOtherCommands:
    def test_convergence(self, tmp_path):
        rc = main([
            "convergence", "--model", "rabi", "--g", "1.0", "--levels", "3",
            "--n-list", "20,40,60", "--out", str(tmp_path),
        ])
        assert rc == 0
        _, header, rows = read_rows(tmp_path / "convergence_rabi.csv")
        assert header[-1] == "max_change"
        assert len(rows) == 3
        assert rows[2][-1] <= rows[1][-1]  # refinement shrinks

    def test_crossing(self, tmp_path, capsys):
        rc = main(["crossing", "--nmax", "40", "--out", str(tmp_path)])
        assert rc == 0
        report = json.loads((tmp_path / "crossing.json").read_text())
        assert report["analytic_g"] == pytest.approx(1 / np.sqrt(2), abs=1e-8)
        assert report["quoted_g"] == pytest.approx(np.sqrt(2))
        assert "DISAGREES" in report["note"]
        assert "sqrt(2)" in capsys.readouterr().out

    def test_config_file_with_flag_override(self, tmp_path):
        cfg_file = tmp_path / "run.json"
        cfg_file.write_text(json.dumps({"model": "rabi", "n_max": 25, "k_levels": 2}))
        rc = main([
            "spectrum", "--config", str(cfg_file), "--levels", "3",
            "--g-max", "0.1", "--g-step", "0.1", "--out", str(tmp_path),
        ])
        assert rc == 0
        _, header, _ = read_rows(tmp_path / "spectrum_rabi.csv")
        assert header == ["g", "E1", "E2", "E3"]  # flag overrode the file


class TestExitCodes:
    def test_usage_error_bad_model(self, tmp_path):
        assert main(["spectrum", "--model", "dicke", "--out", str(tmp_path)]) == 1

    def test_usage_error_bad_value(self, tmp_path):
        assert main(["spectrum", "--nmax", "0", "--out", str(tmp_path)]) == 1

    def test_usage_error_missing_command(self):
        assert main([]) == 1

    def test_usage_error_both_models_for_berry(self, tmp_path):
        assert main(["berry", "--model", "both", "--out", str(tmp_path)]) == 1

    def test_numerical_error_no_crossing(self, tmp_path):
        rc = main([
            "crossing", "--g-lo", "0.1", "--g-hi", "0.2", "--nmax", "30",
            "--out", str(tmp_path),
        ])
        assert rc == 2

    def test_verify_subset(self, tmp_path, capsys):
        rc = main(["verify", "--only", "5,10", "--out", str(tmp_path)])
        assert rc == 0
        out = capsys.readouterr().out
        assert "criterion  5" in out and "criterion 10" in out
        assert (tmp_path / "verify_report.txt").exists()

    def test_console_entry_point(self):
        proc = subprocess.run(
            [sys.executable, "-m", "jcrabi", "--version"],
            capture_output=True, text=True,
        )
        assert proc.returncode == 0
        assert "jcrabi" in proc.stdout
