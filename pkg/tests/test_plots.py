"""Secondary-component tests: figure rendering from CLI artifacts.

The renderer is exercised strictly through its command line, on CSVs
produced by the primary command line, so these tests double as a check of
the artifact contract between the two components.
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest

RENDER = Path(__file__).resolve().parent.parent / "plots" / "render.py"


def run_render(*args):
    return subprocess.run([sys.executable, str(RENDER), *args],
                          capture_output=True, text=True)


@pytest.fixture(scope="module")
def artifacts(tmp_path_factory):
    """Small transmission + scan + decay runs through the primary CLI."""
    from holeburn.cli import main

    base = tmp_path_factory.mktemp("artifacts")
    cfg = base / "config.json"
    cfg.write_text(json.dumps({
        "density": {"grid_points": 8001},
        "probe": {"points": 2001},
        "scan": {"offset_stop_MHz": 16.0, "offset_step_MHz": 2.0,
                 "probe_points": 800},
        "dynamics": {"t_max_us": 0.3, "t_max_holes_us": 0.3, "n_bins": 300,
                     "drive": {"n_pulses": 5, "t_max_us": 0.8}},
        "fit": {"window_us": [0.05, 0.25], "window_holes_us": [0.05, 0.25],
                "crossover_holes": False, "drive_window_us": [0.3, 0.8]},
    }))
    out = base / "out"
    assert main(["transmission", "--config", str(cfg), "--out", str(out)]) == 0
    assert main(["scan", "--config", str(cfg), "--out", str(out)]) == 0
    assert main(["decay", "--config", str(cfg), "--out", str(out)]) == 0
    return out


class TestCriterion11:
    def test_heatmap_with_ridge(self, artifacts, tmp_path):
        img = tmp_path / "scan.svg"
        proc = run_render("--kind", "heatmap", "--in", str(artifacts / "scan.csv"),
                          "--out", str(img))
        assert proc.returncode == 0, proc.stderr
        assert img.stat().st_size > 0
        # The ridge: the brightest scan row sits near the coupling offset.
        data = np.loadtxt(artifacts / "scan.csv", delimiter=",", skiprows=1)
        offsets = data[:, 0]
        best = offsets[np.argmax(data[:, 2])]
        assert abs(best - 8.56) <= 2.0

    def test_linlog_panel(self, artifacts, tmp_path):
        img = tmp_path / "panel.svg"
        proc = run_render("--kind", "panel",
                          "--in", str(artifacts / "spectrum_no_holes.csv"),
                          str(artifacts / "spectrum_holes.csv"),
                          str(artifacts / "density_holes.csv"),
                          "--out", str(img), "--log-y")
        assert proc.returncode == 0, proc.stderr
        assert img.stat().st_size > 0

    def test_schema_mismatch_names_column(self, artifacts, tmp_path):
        bad = tmp_path / "bad.csv"
        bad.write_text("omega_bar_MHz,T_abs2\n0.0,0.5\n")
        proc = run_render("--kind", "heatmap", "--in", str(bad),
                          "--out", str(tmp_path / "x.svg"))
        assert proc.returncode != 0
        assert "omega_over_2pi_MHz" in proc.stderr


class TestRendererEdges:
    def test_empty_csv_rejected(self, tmp_path):
        empty = tmp_path / "empty.csv"
        empty.write_text("")
        proc = run_render("--kind", "heatmap", "--in", str(empty),
                          "--out", str(tmp_path / "x.svg"))
        assert proc.returncode == 2
        assert "empty" in proc.stderr

    def test_timeseries_with_fit_overlay(self, artifacts, tmp_path):
        img = tmp_path / "decay.svg"
        proc = run_render("--kind", "timeseries",
                          "--in", str(artifacts / "decay_no_holes.csv"),
                          str(artifacts / "decay_holes.csv"),
                          "--out", str(img), "--log-y",
                          "--fit", str(artifacts / "fit_no_holes.json"))
        assert proc.returncode == 0, proc.stderr
        assert img.stat().st_size > 0

    def test_inputs_not_modified(self, artifacts, tmp_path):
        target = artifacts / "scan.csv"
        before = target.read_bytes()
        run_render("--kind", "heatmap", "--in", str(target),
                   "--out", str(tmp_path / "x.svg"))
        assert target.read_bytes() == before

    def test_deterministic_geometry(self, artifacts, tmp_path):
        imgs = []
        for name in ("a.svg", "b.svg"):
            img = tmp_path / name
            proc = run_render("--kind", "heatmap",
                              "--in", str(artifacts / "scan.csv"),
                              "--out", str(img))
            assert proc.returncode == 0
            imgs.append(img.read_text())
        # SVG output embeds no timestamps, so identical inputs give
        # identical documents.
        assert imgs[0] == imgs[1]
