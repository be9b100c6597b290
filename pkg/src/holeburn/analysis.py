"""Quantitative observables: decay rates, peak enhancement, Rabi splitting.

Decay rates are extracted from the Rabi-peak envelope of N(t): local maxima
inside a fit window are fitted as ln(N_peak) = ln(C) - Gamma * t_peak, so
Gamma is the decay rate of the N(t) envelope, N_env(t) = C exp(-Gamma t).
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InsufficientDataError
from .response import TransmissionSpectrum, _refine_peak
from .spectral import SpectralDensity, SystemParams
from .units import TWO_PI

__all__ = [
    "DecayFit",
    "fit_decay_rate",
    "gamma_estimate",
    "peak_enhancement",
    "rabi_splitting",
    "write_fit_report",
]

MIN_PEAKS = 4


@dataclass(frozen=True)
class DecayFit:
    """Least-squares envelope fit N_env(t) = prefactor * exp(-gamma_total * t)."""

    gamma_total: float
    prefactor: float
    window: tuple
    residual: float
    n_peaks_used: int


def _local_maxima(values):
    """Indices of strict 3-point local maxima (endpoints excluded)."""
    interior = (values[1:-1] > values[:-2]) & (values[1:-1] > values[2:])
    return np.nonzero(interior)[0] + 1


def _fit_log_envelope(t_peaks, log_peaks, window):
    slope, intercept = np.polyfit(t_peaks, log_peaks, 1)
    resid = log_peaks - (slope * t_peaks + intercept)
    return DecayFit(
        gamma_total=float(-slope),
        prefactor=float(np.exp(intercept)),
        window=(float(window[0]), float(window[1])),
        residual=float(np.sqrt(np.mean(resid**2))),
        n_peaks_used=int(t_peaks.size),
    )


def _split_at_changepoint(t_peaks, log_peaks):
    """Two-segment piecewise-linear fit; returns the index starting the
    asymptotic (second) segment, or 0 if no valid split exists."""
    n = t_peaks.size
    best_k, best_sse = 0, np.inf
    for k in range(MIN_PEAKS, n - MIN_PEAKS + 1):
        sse = 0.0
        for sl in (slice(0, k), slice(k, n)):
            coef = np.polyfit(t_peaks[sl], log_peaks[sl], 1)
            r = log_peaks[sl] - np.polyval(coef, t_peaks[sl])
            sse += float(np.dot(r, r))
        if sse < best_sse:
            best_k, best_sse = k, sse
    return best_k


def fit_decay_rate(series, window, crossover: bool = False) -> DecayFit:
    """Fit the exponential envelope of the Rabi peaks of N(t) inside ``window``.

    With ``crossover=True`` a two-segment changepoint fit of the peak
    envelope is performed first and only the asymptotic (late) segment is
    used, which handles the transient-then-slow-decay shape of the
    hole-burnt dynamics.
    """
    times = np.asarray(series.times, dtype=float)
    values = np.asarray(series.values, dtype=float)
    t0, t1 = window
    mask = (times >= t0) & (times <= t1)
    t_win = times[mask]
    v_win = values[mask]
    peak_idx = _local_maxima(v_win)
    if peak_idx.size < MIN_PEAKS:
        raise InsufficientDataError(
            f"need at least {MIN_PEAKS} Rabi peaks in the fit window, found {peak_idx.size}"
        )
    t_peaks = t_win[peak_idx]
    peaks = v_win[peak_idx]
    if np.any(peaks <= 0.0):
        raise DomainError("envelope fit requires strictly positive peak values")
    log_peaks = np.log(peaks)
    if crossover and t_peaks.size >= 2 * MIN_PEAKS:
        k = _split_at_changepoint(t_peaks, log_peaks)
        t_peaks, log_peaks = t_peaks[k:], log_peaks[k:]
    return _fit_log_envelope(t_peaks, log_peaks, window)


def gamma_estimate(density: SpectralDensity, params: SystemParams) -> float:
    """Closed-form decoherence estimate kappa + pi * coupling^2 * rho(w_s +- coupling).

    The density at the two polariton positions is averaged (the two values
    coincide for densities symmetric about omega_s).
    """
    grid = density.grid
    for omega in (params.omega_s - params.omega_coupling, params.omega_s + params.omega_coupling):
        if not grid.contains(omega):
            raise DomainError("omega_s +- coupling lies outside the density grid")
    rho_avg = 0.5 * (
        density.value_at(params.omega_s - params.omega_coupling)
        + density.value_at(params.omega_s + params.omega_coupling)
    )
    return float(params.kappa + np.pi * params.omega_coupling**2 * rho_avg)


def peak_enhancement(spec_holes: TransmissionSpectrum, spec_ref: TransmissionSpectrum) -> float:
    """Ratio of |T|^2 maxima, hole-burnt over reference."""
    if spec_holes.probe != spec_ref.probe:
        raise DomainError("peak_enhancement requires spectra on the same probe grid")
    ref_max = float(np.max(spec_ref.t_abs2))
    if ref_max <= 0.0:
        raise DomainError("reference spectrum maximum is zero")
    return float(np.max(spec_holes.t_abs2)) / ref_max


def rabi_splitting(spec: TransmissionSpectrum) -> float:
    """Distance between the two highest local maxima of |T|^2."""
    probes = spec.probe.omegas()
    idx = _local_maxima(spec.t_abs2)
    if idx.size < 2:
        raise InsufficientDataError("Rabi splitting needs at least 2 spectrum maxima")
    top2 = idx[np.argsort(spec.t_abs2[idx])][-2:]
    positions = [_refine_peak(probes, spec.t_abs2, i)[0] for i in top2]
    return float(abs(positions[1] - positions[0]))


def write_fit_report(fit: DecayFit, kappa: float, path) -> None:
    """JSON report of a decay fit, frequencies quoted as omega/2pi in MHz."""
    report = {
        "gamma_total_over_2pi_MHz": fit.gamma_total / TWO_PI,
        "gamma_over_kappa": fit.gamma_total / kappa,
        "C": fit.prefactor,
        "window_us": list(fit.window),
        "residual": fit.residual,
        "n_peaks_used": fit.n_peaks_used,
    }
    with open(path, "w") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
        fh.write("\n")
