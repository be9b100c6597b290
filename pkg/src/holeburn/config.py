"""Experiment configuration: a JSON file of omega/2pi values in MHz/GHz.

All frequencies in config files are quoted divided by 2pi, as is customary
for the experimental constants; the conversion to angular units happens
exactly once, at ingestion.  Unknown keys are rejected so that a typo in a
setting name cannot silently fall back to a default.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .dynamics import DriveSignal, make_pulse_train
from .errors import ConfigurationError
from .spectral import (
    FrequencyGrid,
    HoleProfile,
    HoleSpec,
    QGaussianSpec,
    SpectralDensity,
    SystemParams,
    build_q_gaussian,
    burn_holes,
)
from .units import omega_from_ghz, omega_from_mhz

__all__ = ["ExperimentConfig", "load_config", "write_effective_config", "DEFAULTS"]


# Shipped defaults: the experimental constants of the reference setup.
DEFAULTS = {
    "system": {
        "cavity_GHz": 2.6915,
        "spin_GHz": 2.6915,
        "coupling_MHz": 8.56,
        "kappa_MHz": 0.4,
        "gamma_MHz": 0.001,
    },
    "density": {
        "fwhm_MHz": 9.44,
        "q": 1.39,
        "grid_half_span_MHz": 50.0,
        "grid_points": 20001,
    },
    "holes": [
        {"offset_MHz": 8.56, "width_MHz": 0.7, "depth": 1.0,
         "profile": "fermi_dirac", "edge_MHz": None},
        {"offset_MHz": -8.56, "width_MHz": 0.7, "depth": 1.0,
         "profile": "fermi_dirac", "edge_MHz": None},
    ],
    "probe": {"half_span_MHz": 25.0, "points": 20001},
    "scan": {
        "offset_start_MHz": 0.0,
        "offset_stop_MHz": 16.0,
        "offset_step_MHz": 0.1,
        "width_MHz": 1.22,
        "depth": 1.0,
        "profile": "fermi_dirac",
        "edge_MHz": None,
        "probe_half_span_MHz": 20.0,
        "probe_points": 8000,
    },
    "dynamics": {
        "dt_us": 0.0005,
        "t_max_us": 1.5,
        "t_max_holes_us": 10.0,
        "n_bins": 2000,
        "drive": {
            "n_pulses": 11,
            "pulse_us": 0.052,
            "amplitude": 100.0,
            "phase_flip": True,
            "t_max_us": 4.0,
        },
    },
    "fit": {
        "window_us": [0.05, 0.4],
        "window_holes_us": [0.3, 10.0],
        "crossover_holes": True,
        "drive_window_us": [0.65, 4.0],
    },
    "output_dir": "out",
}

_PROFILES = {p.value: p for p in HoleProfile}


def _reject_unknown(data, allowed, where):
    for key in data:
        if key not in allowed:
            raise ConfigurationError(f"{where}: unknown key '{key}'")


def _merged(defaults, data, where):
    """Defaults overlaid with data, recursing into nested tables."""
    if not isinstance(data, dict):
        raise ConfigurationError(f"{where}: expected a table of settings")
    _reject_unknown(data, defaults, where)
    out = {}
    for key, dflt in defaults.items():
        if key not in data:
            out[key] = dflt
        elif isinstance(dflt, dict):
            out[key] = _merged(dflt, data[key], f"{where}.{key}")
        else:
            out[key] = data[key]
    return out


def _number(section, key, where, positive=True, allow_zero=False):
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, (int, float)):
        raise ConfigurationError(f"{where}.{key}: expected a number, got {v!r}")
    if positive and not (v > 0.0 or (allow_zero and v == 0.0)):
        bound = ">= 0" if allow_zero else "> 0"
        raise ConfigurationError(f"{where}.{key}: must be {bound}, got {v}")
    return float(v)


def _integer(section, key, where, minimum=1):
    v = section[key]
    if isinstance(v, bool) or not isinstance(v, int):
        raise ConfigurationError(f"{where}.{key}: expected an integer, got {v!r}")
    if v < minimum:
        raise ConfigurationError(f"{where}.{key}: must be >= {minimum}, got {v}")
    return v


def _window(section, key, where):
    v = section[key]
    if (not isinstance(v, (list, tuple)) or len(v) != 2
            or any(isinstance(x, bool) or not isinstance(x, (int, float)) for x in v)):
        raise ConfigurationError(f"{where}.{key}: expected [t_start_us, t_end_us]")
    lo, hi = float(v[0]), float(v[1])
    if not 0.0 <= lo < hi:
        raise ConfigurationError(f"{where}.{key}: window must satisfy 0 <= start < end")
    return (lo, hi)


def _hole_from_table(table, center_ref, gamma, where):
    offset = table["offset_MHz"]
    if isinstance(offset, bool) or not isinstance(offset, (int, float)):
        raise ConfigurationError(f"{where}.offset_MHz: expected a number")
    width = omega_from_mhz(_number(table, "width_MHz", where))
    depth = table["depth"]
    if isinstance(depth, bool) or not isinstance(depth, (int, float)) or not 0.0 <= depth <= 1.0:
        raise ConfigurationError(f"{where}.depth: must be a number in [0, 1]")
    profile = table["profile"]
    if profile not in _PROFILES:
        raise ConfigurationError(
            f"{where}.profile: expected one of {sorted(_PROFILES)}, got {profile!r}")
    edge = table["edge_MHz"]
    if edge is not None:
        edge = omega_from_mhz(_number(table, "edge_MHz", where))
    if not width > gamma:
        raise ConfigurationError(
            f"{where}.width_MHz: hole width must exceed the spin linewidth gamma")
    return HoleSpec(
        center=center_ref + omega_from_mhz(float(offset)),
        width=width,
        depth=float(depth),
        profile=_PROFILES[profile],
        edge_smoothness=edge,
    )


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated experiment settings with all frequencies in rad/us.

    ``effective`` holds the fully defaulted raw table (still in MHz/GHz);
    writing it back out and re-ingesting reproduces this object exactly.
    """

    params: SystemParams
    grid: FrequencyGrid
    line: QGaussianSpec
    holes: tuple
    probe: FrequencyGrid
    scan_offsets: tuple
    scan_template: HoleSpec
    scan_probe: FrequencyGrid
    dt: float
    t_max: float
    t_max_holes: float
    n_bins: int
    drive: DriveSignal
    drive_t_max: float
    fit_window: tuple
    fit_window_holes: tuple
    crossover_holes: bool
    drive_window: tuple
    output_dir: str
    effective: dict

    def build_density(self) -> SpectralDensity:
        return build_q_gaussian(self.line, self.grid)

    def burnt_density(self, base: SpectralDensity | None = None) -> SpectralDensity:
        if base is None:
            base = self.build_density()
        return burn_holes(base, self.holes)


def _build(raw: dict) -> ExperimentConfig:
    eff = {}
    top_allowed = set(DEFAULTS)
    _reject_unknown(raw, top_allowed, "config")

    sys_tab = _merged(DEFAULTS["system"], raw.get("system", {}), "system")
    params = SystemParams(
        omega_c=omega_from_ghz(_number(sys_tab, "cavity_GHz", "system")),
        omega_s=omega_from_ghz(_number(sys_tab, "spin_GHz", "system")),
        omega_coupling=omega_from_mhz(_number(sys_tab, "coupling_MHz", "system")),
        kappa=omega_from_mhz(_number(sys_tab, "kappa_MHz", "system")),
        gamma=omega_from_mhz(_number(sys_tab, "gamma_MHz", "system", allow_zero=True)),
    )
    eff["system"] = sys_tab

    den_tab = _merged(DEFAULTS["density"], raw.get("density", {}), "density")
    line = QGaussianSpec(
        center=params.omega_s,
        fwhm=omega_from_mhz(_number(den_tab, "fwhm_MHz", "density")),
        q=_number(den_tab, "q", "density"),
    )
    grid = FrequencyGrid.centered(
        params.omega_s,
        omega_from_mhz(_number(den_tab, "grid_half_span_MHz", "density")),
        _integer(den_tab, "grid_points", "density", minimum=3),
    )
    eff["density"] = den_tab

    holes_raw = raw.get("holes", DEFAULTS["holes"])
    if not isinstance(holes_raw, list):
        raise ConfigurationError("holes: expected a list of hole tables")
    hole_tabs, holes = [], []
    for i, entry in enumerate(holes_raw):
        where = f"holes[{i}]"
        tab = _merged(DEFAULTS["holes"][0], entry, where)
        hole_tabs.append(tab)
        holes.append(_hole_from_table(tab, params.omega_s, params.gamma, where))
    eff["holes"] = hole_tabs

    probe_tab = _merged(DEFAULTS["probe"], raw.get("probe", {}), "probe")
    probe = FrequencyGrid.centered(
        params.omega_s,
        omega_from_mhz(_number(probe_tab, "half_span_MHz", "probe")),
        _integer(probe_tab, "points", "probe", minimum=3),
    )
    eff["probe"] = probe_tab

    scan_tab = _merged(DEFAULTS["scan"], raw.get("scan", {}), "scan")
    start = _number(scan_tab, "offset_start_MHz", "scan", allow_zero=True)
    stop = _number(scan_tab, "offset_stop_MHz", "scan")
    step = _number(scan_tab, "offset_step_MHz", "scan")
    if stop < start:
        raise ConfigurationError("scan.offset_stop_MHz: must be >= offset_start_MHz")
    n_off = int(round((stop - start) / step)) + 1
    scan_offsets = tuple(omega_from_mhz(start + k * step) for k in range(n_off))
    scan_template = _hole_from_table(
        {"offset_MHz": 0.0, "width_MHz": scan_tab["width_MHz"],
         "depth": scan_tab["depth"], "profile": scan_tab["profile"],
         "edge_MHz": scan_tab["edge_MHz"]},
        0.0, params.gamma, "scan")
    scan_probe = FrequencyGrid.centered(
        params.omega_s,
        omega_from_mhz(_number(scan_tab, "probe_half_span_MHz", "scan")),
        _integer(scan_tab, "probe_points", "scan", minimum=3),
    )
    eff["scan"] = scan_tab

    dyn_tab = _merged(DEFAULTS["dynamics"], raw.get("dynamics", {}), "dynamics")
    dt = _number(dyn_tab, "dt_us", "dynamics")
    t_max = _number(dyn_tab, "t_max_us", "dynamics")
    t_max_holes = _number(dyn_tab, "t_max_holes_us", "dynamics")
    n_bins = _integer(dyn_tab, "n_bins", "dynamics")
    drv = dyn_tab["drive"]
    if not isinstance(drv["phase_flip"], bool):
        raise ConfigurationError("dynamics.drive.phase_flip: expected true or false")
    drive = make_pulse_train(
        _integer(drv, "n_pulses", "dynamics.drive"),
        _number(drv, "pulse_us", "dynamics.drive"),
        _number(drv, "amplitude", "dynamics.drive"),
        drv["phase_flip"],
    )
    drive_t_max = _number(drv, "t_max_us", "dynamics.drive")
    if drive_t_max < drive.end_time:
        raise ConfigurationError(
            "dynamics.drive.t_max_us: must cover the full pulse train")
    eff["dynamics"] = dyn_tab

    fit_tab = _merged(DEFAULTS["fit"], raw.get("fit", {}), "fit")
    if not isinstance(fit_tab["crossover_holes"], bool):
        raise ConfigurationError("fit.crossover_holes: expected true or false")
    eff["fit"] = fit_tab

    out_dir = raw.get("output_dir", DEFAULTS["output_dir"])
    if not isinstance(out_dir, str) or not out_dir:
        raise ConfigurationError("output_dir: expected a non-empty string")
    eff["output_dir"] = out_dir

    return ExperimentConfig(
        params=params,
        grid=grid,
        line=line,
        holes=tuple(holes),
        probe=probe,
        scan_offsets=scan_offsets,
        scan_template=scan_template,
        scan_probe=scan_probe,
        dt=dt,
        t_max=t_max,
        t_max_holes=t_max_holes,
        n_bins=n_bins,
        drive=drive,
        drive_t_max=drive_t_max,
        fit_window=_window(fit_tab, "window_us", "fit"),
        fit_window_holes=_window(fit_tab, "window_holes_us", "fit"),
        crossover_holes=fit_tab["crossover_holes"],
        drive_window=_window(fit_tab, "drive_window_us", "fit"),
        output_dir=out_dir,
        effective=eff,
    )


def load_config(path) -> ExperimentConfig:
    """Parse and validate a JSON config file.

    Raises ConfigurationError with a field-level message on any problem,
    including syntax errors and unknown keys.
    """
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigurationError(f"cannot read config file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigurationError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ConfigurationError("config root must be a JSON object")
    return _build(raw)


def write_effective_config(config: ExperimentConfig, path) -> None:
    """Write the fully defaulted settings table; re-ingesting it is a no-op."""
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(config.effective, fh, indent=2, sort_keys=True)
        fh.write("\n")
