#!/usr/bin/env python3
"""Render simulation CSV artifacts into figures.

Standalone presentation tool: it reads only the documented CSV/JSON
artifact schemas and shares no code with the simulation package.

Kinds:
    panel       density and/or spectrum CSVs -> stacked panel with |T|^2
                and the collective frequency shift (log-y optional)
    heatmap     scan CSV (long format) -> |T|^2 map over hole offsets
    timeseries  decay/drive CSVs -> photon number traces, optional fitted
                envelope overlay from a fit-report JSON

Exit codes: 0 success, 2 bad input (missing file, empty CSV, or schema
mismatch; the first missing column is named).
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
# Stable SVG ids and no embedded date: identical inputs, identical bytes.
matplotlib.rcParams["svg.hashsalt"] = "render"
import matplotlib.pyplot as plt
import numpy as np


def save(fig, out: Path) -> None:
    fig.savefig(out, metadata={"Date": None} if str(out).endswith(".svg") else None)

SCHEMAS = {
    "density": ["omega_over_2pi_MHz", "rho_per_MHz"],
    "spectrum": ["omega_over_2pi_MHz", "T_re", "T_im", "T_abs2", "delta_lamb"],
    "scan": ["omega_bar_MHz", "omega_over_2pi_MHz", "T_abs2"],
    "timeseries": ["t_us", "A_re", "A_im", "N"],
}


class InputError(Exception):
    pass


def read_csv(path: Path) -> dict[str, np.ndarray]:
    try:
        with open(path, newline="") as fh:
            reader = csv.reader(fh)
            try:
                header = next(reader)
            except StopIteration:
                raise InputError(f"{path}: empty CSV") from None
            rows = list(reader)
    except OSError as exc:
        raise InputError(f"{path}: {exc}") from exc
    if not rows:
        raise InputError(f"{path}: no data rows")
    data = np.asarray(rows, dtype=float)
    return {name: data[:, k] for k, name in enumerate(header)}


def require(table: dict, columns: list[str], path: Path) -> None:
    for column in columns:
        if column not in table:
            raise InputError(f"{path}: missing column '{column}'")


def classify(table: dict, path: Path) -> str:
    """Spectrum-or-density detection for the panel kind."""
    if "rho_per_MHz" in table:
        require(table, SCHEMAS["density"], path)
        return "density"
    require(table, SCHEMAS["spectrum"], path)
    return "spectrum"


def render_panel(paths: list[Path], out: Path, log_y: bool) -> None:
    tables = [(p, read_csv(p)) for p in paths]
    kinds = [classify(t, p) for p, t in tables]
    n_rows = (1 if "density" in kinds else 0) + (2 if "spectrum" in kinds else 0)
    if n_rows == 0:
        raise InputError("panel needs at least one density or spectrum CSV")
    fig, axes = plt.subplots(n_rows, 1, figsize=(7.0, 2.6 * n_rows),
                             sharex=True, squeeze=False)
    axes = axes[:, 0]
    row = 0
    if "density" in kinds:
        ax = axes[row]
        for (p, t), kind in zip(tables, kinds):
            if kind == "density":
                ax.plot(t["omega_over_2pi_MHz"], t["rho_per_MHz"], label=p.stem)
        ax.set_ylabel("spectral density (1/MHz)")
        ax.legend(fontsize=8)
        row += 1
    if "spectrum" in kinds:
        ax_t, ax_d = axes[row], axes[row + 1]
        for (p, t), kind in zip(tables, kinds):
            if kind == "spectrum":
                ax_t.plot(t["omega_over_2pi_MHz"], t["T_abs2"], label=p.stem)
                ax_d.plot(t["omega_over_2pi_MHz"], t["delta_lamb"], label=p.stem)
        if log_y:
            ax_t.set_yscale("log")
        ax_t.set_ylabel("|T|^2")
        ax_t.legend(fontsize=8)
        ax_d.set_ylabel("frequency shift")
    axes[-1].set_xlabel("probe frequency (MHz)")
    fig.tight_layout()
    save(fig, out)


def render_heatmap(paths: list[Path], out: Path) -> None:
    if len(paths) != 1:
        raise InputError("heatmap takes exactly one scan CSV")
    table = read_csv(paths[0])
    require(table, SCHEMAS["scan"], paths[0])
    offsets = np.unique(table["omega_bar_MHz"])
    freqs = np.unique(table["omega_over_2pi_MHz"])
    grid = np.full((offsets.size, freqs.size), np.nan)
    i = np.searchsorted(offsets, table["omega_bar_MHz"])
    j = np.searchsorted(freqs, table["omega_over_2pi_MHz"])
    grid[i, j] = table["T_abs2"]
    if np.any(np.isnan(grid)):
        raise InputError(f"{paths[0]}: scan rows do not form a full grid")
    fig, ax = plt.subplots(figsize=(7.0, 4.5))
    mesh = ax.pcolormesh(freqs, offsets, grid, shading="nearest", cmap="viridis")
    fig.colorbar(mesh, ax=ax, label="|T|^2")
    ax.set_xlabel("probe frequency (MHz)")
    ax.set_ylabel("hole offset (MHz)")
    fig.tight_layout()
    save(fig, out)


def render_timeseries(paths: list[Path], out: Path, log_y: bool,
                      fit_path: Path | None) -> None:
    fig, ax = plt.subplots(figsize=(7.0, 4.0))
    t_end = 0.0
    for p in paths:
        table = read_csv(p)
        require(table, SCHEMAS["timeseries"], p)
        ax.plot(table["t_us"], table["N"], label=p.stem, linewidth=0.8)
        t_end = max(t_end, table["t_us"][-1])
    if fit_path is not None:
        report = json.loads(Path(fit_path).read_text())
        gamma = 2.0 * np.pi * report["gamma_total_over_2pi_MHz"]
        t0, t1 = report["window_us"]
        t = np.linspace(t0, min(t1, t_end), 200)
        ax.plot(t, report["C"] * np.exp(-gamma * t), "k--",
                label=f"envelope fit ({report['gamma_total_over_2pi_MHz']:.2f} MHz)")
    if log_y:
        ax.set_yscale("log")
    ax.set_xlabel("time (us)")
    ax.set_ylabel("photon number")
    ax.legend(fontsize=8)
    fig.tight_layout()
    save(fig, out)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="render", description="Render simulation CSV artifacts.")
    parser.add_argument("--kind", required=True,
                        choices=["panel", "heatmap", "timeseries"])
    parser.add_argument("--in", dest="inputs", required=True, nargs="+",
                        type=Path, help="input CSV paths")
    parser.add_argument("--out", required=True, type=Path,
                        help="output image path (format from extension)")
    parser.add_argument("--log-y", action="store_true",
                        help="logarithmic y axis where applicable")
    parser.add_argument("--fit", type=Path, default=None,
                        help="fit-report JSON for an envelope overlay")
    args = parser.parse_args(argv)
    try:
        if args.kind == "panel":
            render_panel(args.inputs, args.out, args.log_y)
        elif args.kind == "heatmap":
            render_heatmap(args.inputs, args.out)
        else:
            render_timeseries(args.inputs, args.out, args.log_y, args.fit)
    except (InputError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
