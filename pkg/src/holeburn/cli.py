"""Command-line entry point: run configured experiments and emit artifacts.

Subcommands:
    transmission  stationary spectra with and without holes, Lamb shift included
    scan          |T|^2 map over symmetric hole positions
    decay         single-photon decay for both hole settings, with fitted rates
    drive         pulse-train response for both hole settings, with fitted rates
    verify        cross-check the two dynamic solvers and basic invariants

Exit codes: 0 success, 1 verification failure, 2 configuration or usage
error, 3 numerical instability.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .analysis import fit_decay_rate, write_fit_report
from .config import ExperimentConfig, load_config, write_effective_config
from .dynamics import (
    RealTimeSeries,
    build_kernel,
    solve_spin_bins,
    solve_volterra,
    write_timeseries_csv,
)
from .errors import HoleburnError, NumericalInstabilityError
from .response import (
    hole_scan,
    lamb_shift_many,
    transmission_spectrum,
    write_scan_csv,
    write_spectrum_csv,
)
from .spectral import (
    FrequencyGrid,
    HoleSpec,
    QGaussianSpec,
    SystemParams,
    build_q_gaussian,
    burn_holes,
    symmetric_holes,
    write_density_csv,
)
from .units import omega_from_mhz

__all__ = ["main", "run"]


def _apply_overrides(config: ExperimentConfig, args) -> tuple:
    """Resolve the hole list after --no-holes / --hole-* flags."""
    if args.no_holes:
        return ()
    holes = config.holes
    if args.hole_width_mhz is not None or args.hole_offset_mhz is not None:
        template = holes[0] if holes else HoleSpec(center=0.0, width=omega_from_mhz(0.7))
        width = (omega_from_mhz(args.hole_width_mhz)
                 if args.hole_width_mhz is not None else template.width)
        offset = (omega_from_mhz(args.hole_offset_mhz)
                  if args.hole_offset_mhz is not None
                  else config.params.omega_coupling)
        pair_template = HoleSpec(
            center=0.0, width=width, depth=template.depth,
            profile=template.profile, edge_smoothness=template.edge_smoothness)
        holes = symmetric_holes(config.params.omega_s, offset, pair_template)
    return tuple(holes)


def _run_transmission(config: ExperimentConfig, holes, out: Path) -> None:
    base = config.build_density()
    spec = transmission_spectrum(base, config.params, config.probe)
    write_density_csv(base, out / "density_no_holes.csv")
    write_spectrum_csv(spec, out / "spectrum_no_holes.csv")
    if holes:
        burnt = burn_holes(base, holes)
        spec_h = transmission_spectrum(burnt, config.params, config.probe)
        write_density_csv(burnt, out / "density_holes.csv")
        write_spectrum_csv(spec_h, out / "spectrum_holes.csv")


def _run_scan(config: ExperimentConfig, out: Path) -> None:
    base = config.build_density()
    scan = hole_scan(config.params, base, config.scan_offsets,
                     config.scan_template, config.scan_probe)
    write_scan_csv(scan, out / "scan.csv")


def _decay_series(density, config: ExperimentConfig, t_max, drive=None, a0=1.0 + 0.0j):
    kernel = build_kernel(density, config.params, config.dt, t_max)
    return solve_volterra(kernel, config.params, drive, a0, config.dt, t_max)


def _run_decay(config: ExperimentConfig, holes, out: Path) -> None:
    base = config.build_density()
    series = _decay_series(base, config, config.t_max)
    write_timeseries_csv(series, out / "decay_no_holes.csv")
    photon = RealTimeSeries(series.times, np.abs(series.amplitudes) ** 2)
    fit = fit_decay_rate(photon, config.fit_window)
    write_fit_report(fit, config.params.kappa, out / "fit_no_holes.json")
    if holes:
        burnt = burn_holes(base, holes)
        series_h = _decay_series(burnt, config, config.t_max_holes)
        write_timeseries_csv(series_h, out / "decay_holes.csv")
        photon_h = RealTimeSeries(series_h.times, np.abs(series_h.amplitudes) ** 2)
        fit_h = fit_decay_rate(photon_h, config.fit_window_holes,
                               crossover=config.crossover_holes)
        write_fit_report(fit_h, config.params.kappa, out / "fit_holes.json")


def _run_drive(config: ExperimentConfig, holes, out: Path) -> None:
    base = config.build_density()
    series = _decay_series(base, config, config.drive_t_max,
                           drive=config.drive, a0=0.0 + 0.0j)
    write_timeseries_csv(series, out / "drive_no_holes.csv", drive=config.drive)
    photon = RealTimeSeries(series.times, np.abs(series.amplitudes) ** 2)
    fit = fit_decay_rate(photon, config.drive_window)
    write_fit_report(fit, config.params.kappa, out / "drive_fit_no_holes.json")
    if holes:
        burnt = burn_holes(base, holes)
        series_h = _decay_series(burnt, config, config.drive_t_max,
                                 drive=config.drive, a0=0.0 + 0.0j)
        write_timeseries_csv(series_h, out / "drive_holes.csv", drive=config.drive)
        photon_h = RealTimeSeries(series_h.times, np.abs(series_h.amplitudes) ** 2)
        fit_h = fit_decay_rate(photon_h, config.drive_window,
                               crossover=config.crossover_holes)
        write_fit_report(fit_h, config.params.kappa, out / "drive_fit_holes.json")


def _run_verify(config: ExperimentConfig, holes, out: Path) -> int:
    """Solver cross-check plus invariant spot checks; returns 1 on failure."""
    checks = {}
    base = config.build_density()
    t_check = min(0.5, config.t_max)
    dt = min(config.dt, 2.0e-4)

    settings = [("no_holes", base)]
    if holes:
        settings.append(("holes", burn_holes(base, holes)))
    for name, density in settings:
        kernel = build_kernel(density, config.params, dt, t_check)
        a_volterra = solve_volterra(kernel, config.params, None, 1.0 + 0.0j, dt, t_check)
        a_bins = solve_spin_bins(density, config.params, None, 1.0 + 0.0j,
                                 config.n_bins, dt, t_check)
        err = float(np.max(np.abs(a_volterra.amplitudes - a_bins.amplitudes)))
        checks[f"solver_agreement_{name}"] = {"max_error": err, "ok": err < 1.0e-3}
        excitation = a_bins.excitation
        drops = bool(np.all(np.diff(excitation) <= 1.0e-12 * excitation[0]))
        checks[f"dissipation_monotone_{name}"] = {"ok": drops}

    rng = np.random.default_rng(20260823)
    worst = 0.0
    for _ in range(200):
        p = SystemParams.from_mhz(
            2691.5, 2691.5 + rng.uniform(-2.0, 2.0),
            rng.uniform(1.0, 12.0), rng.uniform(0.05, 1.0))
        g = FrequencyGrid.centered(p.omega_s, omega_from_mhz(rng.uniform(45.0, 80.0)), 4001)
        rho = build_q_gaussian(QGaussianSpec(p.omega_s, omega_from_mhz(rng.uniform(2.0, 10.0)),
                                             rng.uniform(1.05, 2.5)), g)
        probe = FrequencyGrid.centered(p.omega_s, omega_from_mhz(25.0), 400)
        worst = max(worst, float(np.abs(transmission_spectrum(rho, p, probe).t_complex).max()))
    checks["transmission_bounded"] = {"max_abs_t": worst, "ok": worst <= 1.0 + 1.0e-12}

    probes = config.params.omega_s + omega_from_mhz(
        np.array([0.5, 1.0, 2.5, 5.0, 10.0]))
    mirror = 2.0 * config.params.omega_s - probes
    d_plus = lamb_shift_many(base, probes)
    d_minus = lamb_shift_many(base, mirror)
    asym = float(np.max(np.abs(d_plus + d_minus) / np.max(np.abs(d_plus))))
    checks["lamb_shift_antisymmetry"] = {"residual": asym, "ok": asym < 1.0e-6}

    ok = all(c["ok"] for c in checks.values())
    report = {"ok": ok, "checks": checks}
    with open(out / "verify_report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
    for name, c in sorted(checks.items()):
        print(f"{'PASS' if c['ok'] else 'FAIL'}  {name}")
    return 0 if ok else 1


def run(config: ExperimentConfig, subcommand: str, holes, out: Path) -> int:
    out.mkdir(parents=True, exist_ok=True)
    write_effective_config(config, out / "config_effective.json")
    if subcommand == "transmission":
        _run_transmission(config, holes, out)
    elif subcommand == "scan":
        _run_scan(config, out)
    elif subcommand == "decay":
        _run_decay(config, holes, out)
    elif subcommand == "drive":
        _run_drive(config, holes, out)
    elif subcommand == "verify":
        return _run_verify(config, holes, out)
    else:
        raise AssertionError(f"unreachable subcommand {subcommand}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="holeburn",
        description="Cavity/spin-ensemble simulations with spectral hole burning.")
    sub = parser.add_subparsers(dest="subcommand", required=True)
    for name, doc in [
        ("transmission", "stationary spectra with and without holes"),
        ("scan", "|T|^2 map over symmetric hole positions"),
        ("decay", "single-photon decay and fitted rates"),
        ("drive", "pulse-train response and fitted rates"),
        ("verify", "solver cross-check and invariant suite"),
    ]:
        p = sub.add_parser(name, help=doc)
        p.add_argument("--config", required=True, help="path to a JSON config file")
        p.add_argument("--out", default=None, help="output directory (default from config)")
        p.add_argument("--no-holes", action="store_true",
                       help="skip hole burning everywhere")
        p.add_argument("--hole-width-mhz", type=float, default=None,
                       help="override hole width (full width, MHz)")
        p.add_argument("--hole-offset-mhz", type=float, default=None,
                       help="override hole offset from the spin center (MHz)")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        config = load_config(args.config)
        holes = _apply_overrides(config, args)
        out = Path(args.out) if args.out is not None else Path(config.output_dir)
        return run(config, args.subcommand, holes, out)
    except NumericalInstabilityError as exc:
        at = f" at t = {exc.time:.6g} us" if exc.time is not None else ""
        print(f"error: numerical instability{at}: {exc}", file=sys.stderr)
        return 3
    except HoleburnError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
