"""Stationary response: nonlinear Lamb shift, transmission, resonances.

The Lamb shift is the Cauchy principal value

    delta(omega) = P int rho(w) / (omega - w) dw,

evaluated on the density's uniform grid by singularity subtraction: the
regularized integrand (rho(w) - rho(omega))/(omega - w) is integrated by
the trapezoidal rule (with the removable singularity replaced by
-rho'(omega)), and the subtracted part contributes the analytic term
rho(omega) * ln((omega - w_min)/(w_max - omega)).
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, replace

import numpy as np
from scipy.signal import find_peaks

from .errors import DomainError, UsageError
from .spectral import (
    FrequencyGrid,
    HoleSpec,
    SpectralDensity,
    SystemParams,
    burn_holes,
    symmetric_holes,
)
from .units import TWO_PI

__all__ = [
    "TransmissionSpectrum",
    "Resonance",
    "HoleScanMap",
    "lamb_shift",
    "lamb_shift_many",
    "transmission",
    "transmission_spectrum",
    "find_resonances",
    "hole_scan",
    "write_spectrum_csv",
    "write_scan_csv",
]

# Probes within this fraction of a grid spacing snap onto the grid point.
SNAP_TOL = 1.0e-6

# Default tolerances for flagging a full resonance (both exposed as kwargs):
# condition (i) |(w_r - w_c)/coupling^2 - delta(w_r)| < COND_I_TOL * max|delta|,
# condition (ii) rho(w_r) < COND_II_TOL * max(rho).
COND_I_TOL = 5.0e-3
COND_II_TOL = 1.0e-2


@dataclass(frozen=True)
class TransmissionSpectrum:
    """Complex transmission and |T|^2 on a probe grid (delta kept for export)."""

    probe: FrequencyGrid
    t_complex: np.ndarray
    t_abs2: np.ndarray
    delta: np.ndarray | None = None


@dataclass(frozen=True)
class Resonance:
    omega: float
    t_abs2: float
    condition_i_residual: float
    condition_ii_residual: float
    full_resonance: bool


@dataclass(frozen=True)
class HoleScanMap:
    """|T(omega)|^2 rows for symmetric hole pairs at omega_s +- offset."""

    offsets: np.ndarray
    probe: FrequencyGrid
    t_abs2_rows: np.ndarray

    def __post_init__(self):
        if self.t_abs2_rows.shape != (len(self.offsets), self.probe.n_points):
            raise UsageError("scan map rows do not match offsets/probe grid")


def _trapezoid_weights(n, h):
    w = np.full(n, h)
    w[0] = w[-1] = 0.5 * h
    return w


def lamb_shift_many(density: SpectralDensity, probe_omegas, chunk=256) -> np.ndarray:
    """Vectorized Lamb shift at many probe frequencies."""
    w = density.grid.omegas()
    r = density.values
    h = density.grid.spacing
    n = density.grid.n_points
    weights = _trapezoid_weights(n, h)
    probes = np.atleast_1d(np.asarray(probe_omegas, dtype=float))
    out = np.empty(probes.shape, dtype=float)

    near_lo = np.abs(probes - w[0]) <= SNAP_TOL * h
    near_hi = np.abs(probes - w[-1]) <= SNAP_TOL * h
    if np.any(near_lo) or np.any(near_hi):
        raise DomainError(
            "probe frequency coincides with a density grid endpoint; the "
            "principal-value log term diverges there (shrink the probe range)"
        )

    outside = (probes < w[0]) | (probes > w[-1])
    for start in range(0, probes.size, chunk):
        sl = slice(start, min(start + chunk, probes.size))
        p = probes[sl]
        out_chunk = np.empty(p.shape, dtype=float)

        out_mask = outside[sl]
        if np.any(out_mask):
            # Outside the grid the integrand is regular; integrate directly.
            d = p[out_mask, None] - w[None, :]
            out_chunk[out_mask] = (r[None, :] / d) @ weights

        in_mask = ~out_mask
        if np.any(in_mask):
            pin = p[in_mask]
            idx = np.rint((pin - w[0]) / h).astype(int)
            nearest = w[0] + idx * h
            snapped = np.abs(pin - nearest) <= SNAP_TOL * h
            pc = np.where(snapped, nearest, pin)
            rho_p = np.interp(pc, w, r)
            d = pc[:, None] - w[None, :]
            with np.errstate(divide="ignore", invalid="ignore"):
                integrand = (r[None, :] - rho_p[:, None]) / d
            if np.any(snapped):
                rows = np.nonzero(snapped)[0]
                cols = idx[rows]
                # Removable singularity: limit is -rho'(omega), centered diff.
                integrand[rows, cols] = -(r[cols + 1] - r[cols - 1]) / (2.0 * h)
            val = integrand @ weights
            val += rho_p * np.log((pc - w[0]) / (w[-1] - pc))
            out_chunk[in_mask] = val

        out[sl] = out_chunk
    return out


def lamb_shift(density: SpectralDensity, probe_omega: float) -> float:
    """Principal-value Lamb shift at a single probe frequency."""
    return float(lamb_shift_many(density, [probe_omega])[0])


def _transmission_from_parts(params: SystemParams, probes, delta, rho):
    denom = (
        probes
        - params.omega_c
        - params.omega_coupling**2 * delta
        + 1j * (params.kappa + np.pi * params.omega_coupling**2 * rho)
    )
    return 1j * params.kappa / denom


def transmission(density: SpectralDensity, params: SystemParams, probe_omega: float) -> complex:
    """Complex transmission T(omega) at a single probe frequency."""
    delta = lamb_shift(density, probe_omega)
    rho = density.value_at(probe_omega)
    return complex(_transmission_from_parts(params, probe_omega, delta, rho))


def transmission_spectrum(
    density: SpectralDensity, params: SystemParams, probe: FrequencyGrid
) -> TransmissionSpectrum:
    """Pointwise transmission over a probe grid (probes strictly inside the density grid)."""
    probes = probe.omegas()
    delta = lamb_shift_many(density, probes)
    rho = np.interp(probes, density.grid.omegas(), density.values)
    t = _transmission_from_parts(params, probes, delta, rho)
    return TransmissionSpectrum(probe=probe, t_complex=t, t_abs2=np.abs(t) ** 2, delta=delta)


def _refine_peak(x, y, i):
    """Quadratic sub-grid refinement of a 3-point local maximum at index i."""
    h = x[1] - x[0]
    denom = y[i - 1] - 2.0 * y[i] + y[i + 1]
    if denom >= 0.0:
        return x[i], y[i]
    shift = 0.5 * h * (y[i - 1] - y[i + 1]) / denom
    peak = y[i] - 0.25 * (y[i - 1] - y[i + 1]) * shift / h
    return x[i] + shift, peak


def find_resonances(
    density: SpectralDensity,
    params: SystemParams,
    probe: FrequencyGrid,
    prominence=1.0e-4,
    cond_i_tol=COND_I_TOL,
    cond_ii_tol=COND_II_TOL,
):
    """Local maxima of |T|^2 annotated with the two resonance-condition residuals.

    A maximum is flagged ``full_resonance`` (transmission close to the
    |T| = 1 bound) when both (i) (w_r - w_c)/coupling^2 = delta(w_r) and
    (ii) rho(w_r) = 0 hold within their tolerances.
    """
    if probe.n_points < 3:
        raise UsageError("probe grid must contain at least 3 points")
    spec = transmission_spectrum(density, params, probe)
    probes = probe.omegas()
    indices, _ = find_peaks(spec.t_abs2, prominence=prominence)
    delta_scale = float(np.max(np.abs(spec.delta)))
    rho_scale = float(np.max(density.values))
    resonances = []
    for i in indices:
        omega_r, t_peak = _refine_peak(probes, spec.t_abs2, i)
        res_i = abs(
            (omega_r - params.omega_c) / params.omega_coupling**2
            - lamb_shift(density, omega_r)
        )
        res_ii = float(density.value_at(omega_r))
        full = res_i < cond_i_tol * delta_scale and res_ii < cond_ii_tol * rho_scale
        resonances.append(
            Resonance(
                omega=float(omega_r),
                t_abs2=float(t_peak),
                condition_i_residual=float(res_i),
                condition_ii_residual=res_ii,
                full_resonance=bool(full),
            )
        )
    return resonances


def hole_scan(
    params: SystemParams,
    base_density: SpectralDensity,
    offsets,
    hole_template: HoleSpec,
    probe: FrequencyGrid,
) -> HoleScanMap:
    """Burn hole pairs at omega_s +- offset and record |T|^2, one row per offset."""
    offsets = np.asarray(offsets, dtype=float)
    rows = np.empty((offsets.size, probe.n_points))
    for k, offset in enumerate(offsets):
        holes = symmetric_holes(params.omega_s, offset, hole_template)
        burnt = burn_holes(base_density, holes)
        rows[k] = transmission_spectrum(burnt, params, probe).t_abs2
    return HoleScanMap(offsets=offsets, probe=probe, t_abs2_rows=rows)


def write_spectrum_csv(spectrum: TransmissionSpectrum, path) -> None:
    """CSV columns: omega_over_2pi_MHz, T_re, T_im, T_abs2, delta_lamb."""
    probes = spectrum.probe.omegas()
    delta = spectrum.delta if spectrum.delta is not None else np.full(probes.shape, np.nan)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_over_2pi_MHz", "T_re", "T_im", "T_abs2", "delta_lamb"])
        for w, t, t2, d in zip(probes, spectrum.t_complex, spectrum.t_abs2, delta):
            writer.writerow(
                [
                    f"{w / TWO_PI:.12g}",
                    f"{t.real:.12g}",
                    f"{t.imag:.12g}",
                    f"{t2:.12g}",
                    f"{d:.12g}",
                ]
            )


def write_scan_csv(scan: HoleScanMap, path) -> None:
    """Long-format CSV: omega_bar_MHz, omega_over_2pi_MHz, T_abs2."""
    probes = scan.probe.omegas()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_bar_MHz", "omega_over_2pi_MHz", "T_abs2"])
        for offset, row in zip(scan.offsets, scan.t_abs2_rows):
            for w, t2 in zip(probes, row):
                writer.writerow(
                    [f"{offset / TWO_PI:.12g}", f"{w / TWO_PI:.12g}", f"{t2:.12g}"]
                )
