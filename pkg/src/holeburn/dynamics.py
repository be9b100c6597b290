"""Time-domain dynamics of the coupled cavity/spin-ensemble system.

Two independent routes are provided (in the rotating frame at the resonant
drive frequency omega = omega_c = omega_s):

* ``solve_volterra`` integrates the non-Markovian integro-differential
  equation  Adot = -kappa A - int_0^t K(t - tau) A(tau) dtau - eta(t)
  with the memory kernel K(t) built from the spectral density, using
  second-order product integration (trapezoidal convolution and
  trapezoidal time stepping, implicit in the newest point).

* ``solve_spin_bins`` discretizes the ensemble into frequency bins and
  integrates the coupled cavity/spin ODEs with a classical fixed-step
  4th-order scheme.  It serves as the independent oracle for the Volterra
  route.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

import numpy as np

from .errors import NumericalInstabilityError, ResolutionError, UsageError
from .spectral import SpectralDensity, SystemParams
from .units import TWO_PI

__all__ = [
    "KernelTable",
    "DriveSignal",
    "ComplexTimeSeries",
    "RealTimeSeries",
    "build_kernel",
    "solve_volterra",
    "solve_spin_bins",
    "make_pulse_train",
    "single_photon_decay",
    "write_timeseries_csv",
    "write_kernel_csv",
]


@dataclass(frozen=True)
class KernelTable:
    """Memory kernel K(t) tabulated on a uniform time grid [0, t_max]."""

    times: np.ndarray
    values: np.ndarray
    dt: float

    def __post_init__(self):
        if self.times.shape != self.values.shape:
            raise UsageError("kernel times/values length mismatch")


@dataclass(frozen=True)
class DriveSignal:
    """Piecewise-constant complex drive: list of (start, end, amplitude) segments.

    Segments are half-open [start, end), must be time-ordered and
    non-overlapping; the drive is zero outside all segments.
    """

    segments: tuple

    def __post_init__(self):
        segs = tuple((float(a), float(b), complex(c)) for a, b, c in self.segments)
        prev_end = -np.inf
        for start, end, amp in segs:
            if end <= start:
                raise UsageError(f"drive segment [{start}, {end}) is empty or reversed")
            if start < prev_end:
                raise UsageError("drive segments overlap or are out of order")
            if not np.isfinite(amp):
                raise UsageError("drive amplitude must be finite")
            prev_end = end
        object.__setattr__(self, "segments", segs)

    def sample(self, times) -> np.ndarray:
        times = np.asarray(times, dtype=float)
        out = np.zeros(times.shape, dtype=complex)
        for start, end, amp in self.segments:
            out[(times >= start) & (times < end)] = amp
        return out

    def value_at(self, t) -> complex:
        for start, end, amp in self.segments:
            if start <= t < end:
                return amp
        return 0.0 + 0.0j

    @property
    def end_time(self) -> float:
        return self.segments[-1][1] if self.segments else 0.0


@dataclass(frozen=True)
class ComplexTimeSeries:
    """Cavity amplitude A(t) on a uniform time grid, plus optional extras."""

    times: np.ndarray
    amplitudes: np.ndarray
    spins: np.ndarray | None = None        # bin amplitudes, shape (n_times, n_bins)
    excitation: np.ndarray | None = None   # |A|^2 + sum_k |B_k|^2 per time point


@dataclass(frozen=True)
class RealTimeSeries:
    times: np.ndarray
    values: np.ndarray


def _time_grid(dt, t_max):
    n_steps = int(round(t_max / dt))
    return dt * np.arange(n_steps + 1)


def build_kernel(
    density: SpectralDensity, params: SystemParams, dt: float, t_max: float,
    chunk: int = 256,
) -> KernelTable:
    """Tabulate K(t) = coupling^2 * int rho(w) exp(-i(w - w_c)t - gamma t) dw.

    The frequency integral is trapezoidal on the density grid; dt must
    resolve both the coupling period and the grid bandwidth.
    """
    dt_coupling = (TWO_PI / params.omega_coupling) / 40.0
    w = density.grid.omegas()
    bandwidth = max(abs(w[0] - params.omega_c), abs(w[-1] - params.omega_c))
    dt_bandwidth = 1.0 / (2.0 * bandwidth)
    if dt > min(dt_coupling, dt_bandwidth):
        raise ResolutionError(
            f"kernel dt = {dt} too coarse; need dt <= "
            f"{min(dt_coupling, dt_bandwidth):.3e} for this coupling/grid"
        )
    times = _time_grid(dt, t_max)
    h = density.grid.spacing
    weights = np.full(density.grid.n_points, h)
    weights[0] = weights[-1] = 0.5 * h
    weighted_rho = weights * density.values
    detuning = w - params.omega_c
    values = np.empty(times.shape, dtype=complex)
    for start in range(0, times.size, chunk):
        sl = slice(start, min(start + chunk, times.size))
        phases = np.exp(-1j * np.outer(times[sl], detuning))
        values[sl] = phases @ weighted_rho
    values *= params.omega_coupling**2 * np.exp(-params.gamma * times)
    return KernelTable(times=times, values=values, dt=dt)


def solve_volterra(
    kernel: KernelTable,
    params: SystemParams,
    drive: DriveSignal | None,
    a0: complex,
    dt: float,
    t_max: float,
) -> ComplexTimeSeries:
    """Integrate the memory-kernel equation for A(t) by product integration.

    The scheme is trapezoidal in both the convolution and the time step and
    implicit in the newest point; since the equation is linear the implicit
    step is solved in closed form.  Second-order accurate in dt.
    """
    if abs(kernel.dt - dt) > 1.0e-12 * dt:
        raise UsageError("kernel table dt does not match the requested dt")
    n_steps = int(round(t_max / dt))
    if kernel.times.size < n_steps + 1:
        raise UsageError("kernel table does not cover [0, t_max]")
    times = kernel.times[: n_steps + 1]
    kk = kernel.values
    eta = drive.sample(times) if drive is not None else np.zeros(times.size, dtype=complex)

    amp = np.empty(times.size, dtype=complex)
    amp[0] = a0
    # Reversed buffer keeps the convolution slice contiguous for the dot product.
    rev = np.zeros(times.size, dtype=complex)
    rev[-1] = a0
    n_total = times.size - 1
    kappa = params.kappa
    denom = 1.0 + 0.5 * dt * kappa + 0.25 * dt * dt * kk[0]
    conv = 0.0 + 0.0j  # I_n, the convolution integral at the current step
    for n in range(n_steps):
        f_n = -kappa * amp[n] - conv - eta[n]
        if n > 0:
            tail = np.dot(kk[1 : n + 1], rev[n_total - n : n_total])
        else:
            tail = 0.0 + 0.0j
        s_next = dt * (0.5 * kk[n + 1] * amp[0] + tail)
        a_next = (amp[n] + 0.5 * dt * (f_n - s_next - eta[n + 1])) / denom
        if not np.isfinite(a_next):
            raise NumericalInstabilityError(
                f"Volterra solver produced a non-finite amplitude at "
                f"t = {times[n + 1]:.6g} us",
                time=float(times[n + 1]),
            )
        amp[n + 1] = a_next
        rev[n_total - (n + 1)] = a_next
        conv = s_next + 0.5 * dt * kk[0] * a_next
    return ComplexTimeSeries(times=times.copy(), amplitudes=amp)


def _bin_ensemble(density: SpectralDensity, params: SystemParams, n_bins: int):
    """Equal-width bins over the density grid: couplings g_k and centers w_k.

    g_k^2 = coupling^2 * (integral of rho over the bin); the bin frequency is
    the rho-weighted centroid (falls back to the midpoint for empty bins).
    """
    w = density.grid.omegas()
    r = density.values
    cell_groups = np.array_split(np.arange(density.grid.n_points - 1), n_bins)
    g = np.empty(n_bins)
    centers = np.empty(n_bins)
    for k, cells in enumerate(cell_groups):
        idx = np.append(cells, cells[-1] + 1)  # node indices of this slice
        weight = np.trapezoid(r[idx], w[idx])
        g[k] = params.omega_coupling * np.sqrt(max(weight, 0.0))
        if weight > 0.0:
            centers[k] = np.trapezoid(w[idx] * r[idx], w[idx]) / weight
        else:
            centers[k] = 0.5 * (w[idx[0]] + w[idx[-1]])
    return g, centers


def solve_spin_bins(
    density: SpectralDensity,
    params: SystemParams,
    drive: DriveSignal | None,
    a0: complex,
    n_bins: int,
    dt: float,
    t_max: float,
    store_spins: bool = False,
) -> ComplexTimeSeries:
    """Fixed-step RK4 integration of the binned cavity/spin ODE system.

    In the rotating frame at omega = omega_c:
        Adot   = -kappa A + sum_k g_k B_k - eta(t)
        B_kdot = -[gamma + i (w_k - omega_c)] B_k - g_k A
    Spins start in the ground state, B_k(0) = 0.
    """
    g, centers = _bin_ensemble(density, params, n_bins)
    rates = params.gamma + 1j * (centers - params.omega_c)
    stiffness = max(float(np.max(np.abs(centers - params.omega_c)) + params.gamma), params.kappa)
    if dt >= 0.1 / stiffness:
        raise NumericalInstabilityError(
            f"bin-solver step dt = {dt} violates the stability guard "
            f"dt < {0.1 / stiffness:.3e}; use a smaller dt",
        )
    times = _time_grid(dt, t_max)
    kappa = params.kappa

    def deriv(t, a, b):
        da = -kappa * a + np.dot(g, b) - (drive.value_at(t) if drive is not None else 0.0)
        db = -rates * b - g * a
        return da, db

    amp = np.empty(times.size, dtype=complex)
    excitation = np.empty(times.size)
    spins = np.empty((times.size, n_bins), dtype=complex) if store_spins else None
    a = complex(a0)
    b = np.zeros(n_bins, dtype=complex)
    amp[0] = a
    excitation[0] = abs(a) ** 2 + float(np.sum(np.abs(b) ** 2))
    if store_spins:
        spins[0] = b
    for n in range(times.size - 1):
        t = times[n]
        da1, db1 = deriv(t, a, b)
        da2, db2 = deriv(t + 0.5 * dt, a + 0.5 * dt * da1, b + 0.5 * dt * db1)
        da3, db3 = deriv(t + 0.5 * dt, a + 0.5 * dt * da2, b + 0.5 * dt * db2)
        da4, db4 = deriv(t + dt, a + dt * da3, b + dt * db3)
        a = a + (dt / 6.0) * (da1 + 2.0 * da2 + 2.0 * da3 + da4)
        b = b + (dt / 6.0) * (db1 + 2.0 * db2 + 2.0 * db3 + db4)
        if not np.isfinite(a):
            raise NumericalInstabilityError(
                f"bin solver produced a non-finite amplitude at t = {times[n + 1]:.6g} us; "
                "use a smaller dt",
                time=float(times[n + 1]),
            )
        amp[n + 1] = a
        excitation[n + 1] = abs(a) ** 2 + float(np.sum(np.abs(b) ** 2))
        if store_spins:
            spins[n + 1] = b
    return ComplexTimeSeries(times=times, amplitudes=amp, spins=spins, excitation=excitation)


def make_pulse_train(
    n_pulses: int, pulse_duration: float, amplitude: complex, phase_flip: bool
) -> DriveSignal:
    """Contiguous rectangular pulses from t = 0; with phase_flip the sign alternates."""
    if n_pulses < 1:
        raise UsageError("pulse train needs n_pulses >= 1")
    if not pulse_duration > 0.0:
        raise UsageError("pulse_duration must be > 0")
    segments = []
    for k in range(n_pulses):
        sign = -1.0 if (phase_flip and k % 2 == 1) else 1.0
        segments.append((k * pulse_duration, (k + 1) * pulse_duration, sign * amplitude))
    return DriveSignal(segments=tuple(segments))


def single_photon_decay(
    density: SpectralDensity, params: SystemParams, dt: float, t_max: float
) -> RealTimeSeries:
    """Cavity photon number N(t) = |A(t)|^2 for A(0) = 1 and no drive."""
    kernel = build_kernel(density, params, dt, t_max)
    series = solve_volterra(kernel, params, None, 1.0 + 0.0j, dt, t_max)
    return RealTimeSeries(times=series.times, values=np.abs(series.amplitudes) ** 2)


def write_timeseries_csv(series: ComplexTimeSeries, path, drive: DriveSignal | None = None) -> None:
    """CSV columns: t_us, A_re, A_im, N (plus drive_re/drive_im when given)."""
    eta = drive.sample(series.times) if drive is not None else None
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        header = ["t_us", "A_re", "A_im", "N"]
        if eta is not None:
            header += ["drive_re", "drive_im"]
        writer.writerow(header)
        for i, (t, a) in enumerate(zip(series.times, series.amplitudes)):
            row = [f"{t:.12g}", f"{a.real:.12g}", f"{a.imag:.12g}", f"{abs(a)**2:.12g}"]
            if eta is not None:
                row += [f"{eta[i].real:.12g}", f"{eta[i].imag:.12g}"]
            writer.writerow(row)


def write_kernel_csv(kernel: KernelTable, path) -> None:
    """Debug dump of the kernel table: t_us, K_re, K_im."""
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["t_us", "K_re", "K_im"])
        for t, k in zip(kernel.times, kernel.values):
            writer.writerow([f"{t:.12g}", f"{k.real:.12g}", f"{k.imag:.12g}"])
