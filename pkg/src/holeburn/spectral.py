"""Spin spectral densities and spectral hole burning.

The inhomogeneously broadened ensemble is described by a normalized
spectral density rho(omega) tabulated on a uniform frequency grid.  Hole
burning multiplies the density by notch-shaped masks; the integral is not
renormalized afterwards (burning removes spins, which is equivalent to a
slightly reduced effective coupling at fixed coupling constant).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .errors import ConfigurationError, DomainError, ResolutionError, UsageError
from .units import TWO_PI, omega_from_mhz

__all__ = [
    "SystemParams",
    "QGaussianSpec",
    "FrequencyGrid",
    "SpectralDensity",
    "HoleProfile",
    "HoleSpec",
    "build_q_gaussian",
    "burn_holes",
    "removed_fraction",
    "write_density_csv",
]

# Default single-spin loss: 1 kHz, a finite stand-in for the gamma -> 0 limit.
DEFAULT_GAMMA = omega_from_mhz(1.0e-3)

# Shape parameter of the q-Gaussian notch profile (the notch shape itself is
# a modeling choice; only its FWHM is contractual).
NOTCH_Q = 1.39


@dataclass(frozen=True)
class SystemParams:
    """Cavity/ensemble constants, all in angular frequency (rad/us).

    kappa is the cavity half-width at half-maximum decay rate;
    omega_coupling is the effective collective coupling of the ensemble.
    """

    omega_c: float
    omega_s: float
    omega_coupling: float
    kappa: float
    gamma: float = DEFAULT_GAMMA

    def __post_init__(self):
        for name in ("omega_c", "omega_s", "omega_coupling", "kappa"):
            if not getattr(self, name) > 0.0:
                raise ConfigurationError(f"SystemParams.{name} must be > 0")
        if self.gamma < 0.0:
            raise ConfigurationError("SystemParams.gamma must be >= 0")
        if not self.omega_coupling > self.kappa:
            warnings.warn(
                "coupling <= kappa: system is outside the strong-coupling "
                "regime assumed by the default settings",
                stacklevel=2,
            )

    @classmethod
    def from_mhz(cls, omega_c, omega_s, coupling, kappa, gamma=1.0e-3):
        """Build from omega/2pi values in MHz."""
        return cls(
            omega_c=omega_from_mhz(omega_c),
            omega_s=omega_from_mhz(omega_s),
            omega_coupling=omega_from_mhz(coupling),
            kappa=omega_from_mhz(kappa),
            gamma=omega_from_mhz(gamma),
        )


@dataclass(frozen=True)
class QGaussianSpec:
    """q-Gaussian line shape: center, FWHM (both rad/us) and shape q."""

    center: float
    fwhm: float
    q: float

    def __post_init__(self):
        if not (1.0 < self.q < 3.0):
            raise DomainError(f"q-Gaussian shape parameter must be in (1, 3), got {self.q}")
        if not self.fwhm > 0.0:
            raise DomainError("q-Gaussian FWHM must be > 0")


@dataclass(frozen=True)
class FrequencyGrid:
    """Uniform angular-frequency grid [omega_min, omega_max] with n_points."""

    omega_min: float
    omega_max: float
    n_points: int

    def __post_init__(self):
        if not self.omega_min < self.omega_max:
            raise ConfigurationError("FrequencyGrid requires omega_min < omega_max")
        if self.n_points < 3:
            raise ConfigurationError("FrequencyGrid requires n_points >= 3")

    @classmethod
    def centered(cls, center, half_span, n_points=20001):
        return cls(center - half_span, center + half_span, n_points)

    @property
    def spacing(self):
        return (self.omega_max - self.omega_min) / (self.n_points - 1)

    def omegas(self):
        return np.linspace(self.omega_min, self.omega_max, self.n_points)

    def contains(self, omega):
        return self.omega_min <= omega <= self.omega_max


@dataclass(frozen=True)
class SpectralDensity:
    """Tabulated spectral density rho(omega) >= 0 on a uniform grid.

    ``integral`` is the trapezoidal integral of rho over the grid; it is 1
    (within quadrature tolerance) before hole burning and <= 1 afterwards.
    """

    grid: FrequencyGrid
    values: np.ndarray
    integral: float = field(init=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != (self.grid.n_points,):
            raise UsageError(
                f"density values shape {values.shape} does not match grid "
                f"({self.grid.n_points} points)"
            )
        if np.any(values < 0.0):
            raise DomainError("spectral density values must be nonnegative")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "values", values)
        object.__setattr__(
            self, "integral", float(np.trapezoid(values, dx=self.grid.spacing))
        )

    def value_at(self, omega):
        """Linear interpolation of rho; zero outside the grid."""
        return np.interp(omega, self.grid.omegas(), self.values, left=0.0, right=0.0)


class HoleProfile(Enum):
    FERMI_DIRAC = "fermi_dirac"
    RECTANGULAR = "rectangular"
    Q_GAUSSIAN_NOTCH = "q_gaussian_notch"


@dataclass(frozen=True)
class HoleSpec:
    """One spectral hole: a notch of full width ``width`` centered at ``center``.

    depth = 1 drives the density to zero at the hole center.  For the
    Fermi-Dirac profile ``edge_smoothness`` sets the edge scale (default
    width/20, so ``width`` is the full width at half depth).  The physical
    lower bound width > gamma is checked at configuration level, where the
    owning SystemParams is known.
    """

    center: float
    width: float
    depth: float = 1.0
    profile: HoleProfile = HoleProfile.FERMI_DIRAC
    edge_smoothness: float | None = None

    def __post_init__(self):
        if not self.width > 0.0:
            raise DomainError("hole width must be > 0")
        if not 0.0 <= self.depth <= 1.0:
            raise DomainError(f"hole depth must lie in [0, 1], got {self.depth}")
        if self.edge_smoothness is not None and not self.edge_smoothness > 0.0:
            raise DomainError("edge_smoothness must be > 0")


def _q_gaussian_width_param(fwhm, q):
    """Tsallis width Delta from the FWHM: half-maximum at x = fwhm/2."""
    return 0.5 * fwhm * np.sqrt((q - 1.0) / (2.0 ** (q - 1.0) - 1.0))


def _q_gaussian_shape(x, fwhm, q):
    """Unit-peak q-Gaussian [1 + (q-1) x^2/Delta^2]^(-1/(q-1)), stable as q -> 1."""
    delta = _q_gaussian_width_param(fwhm, q)
    u = (q - 1.0) * (x / delta) ** 2
    return np.exp(-np.log1p(u) / (q - 1.0))


def build_q_gaussian(spec: QGaussianSpec, grid: FrequencyGrid) -> SpectralDensity:
    """Tabulate a unit-integral q-Gaussian density on ``grid``.

    The grid must span at least +-4 FWHM around the center; the (infinite
    support, q > 1) tails are truncated at the grid edges and the result is
    renormalized to unit trapezoidal integral.
    """
    if grid.omega_min > spec.center - 4.0 * spec.fwhm or grid.omega_max < spec.center + 4.0 * spec.fwhm:
        raise ConfigurationError(
            "frequency grid must span at least 4 FWHM on each side of the "
            "q-Gaussian center"
        )
    w = grid.omegas()
    vals = _q_gaussian_shape(w - spec.center, spec.fwhm, spec.q)
    vals /= np.trapezoid(vals, dx=grid.spacing)
    return SpectralDensity(grid, vals)


def hole_mask(hole: HoleSpec, omegas: np.ndarray) -> np.ndarray:
    """Multiplicative notch mask in [1 - depth, 1], exactly 1 - depth at center."""
    x = np.abs(np.asarray(omegas, dtype=float) - hole.center)
    half = 0.5 * hole.width
    if hole.profile is HoleProfile.RECTANGULAR:
        shape = (x <= half).astype(float)
    elif hole.profile is HoleProfile.FERMI_DIRAC:
        w_edge = hole.edge_smoothness if hole.edge_smoothness is not None else hole.width / 20.0
        # Rescaled so the notch reaches exactly `depth` at the center.
        arg = np.clip((x - half) / w_edge, None, 700.0)
        shape = (1.0 + np.exp(-half / w_edge)) / (1.0 + np.exp(arg))
    elif hole.profile is HoleProfile.Q_GAUSSIAN_NOTCH:
        shape = _q_gaussian_shape(x, hole.width, NOTCH_Q)
    else:  # pragma: no cover
        raise UsageError(f"unknown hole profile {hole.profile}")
    return 1.0 - hole.depth * shape


def burn_holes(density: SpectralDensity, holes) -> SpectralDensity:
    """Apply the notch masks of ``holes`` to a copy of ``density``.

    Masks compose multiplicatively, so overlapping holes and the order of
    application commute.  The integral is not renormalized afterwards.
    """
    grid = density.grid
    w = grid.omegas()
    values = density.values.copy()
    for hole in holes:
        if not grid.contains(hole.center):
            raise DomainError(
                f"hole center {hole.center} lies outside the density grid"
            )
        if hole.width < 2.0 * grid.spacing:
            raise ResolutionError(
                f"hole width {hole.width} is narrower than 2 grid spacings "
                f"({2.0 * grid.spacing}); refine the grid"
            )
        values *= hole_mask(hole, w)
    return SpectralDensity(grid, values)


def removed_fraction(before: SpectralDensity, after: SpectralDensity) -> float:
    """Fraction of spins removed: 1 - integral(after)/integral(before)."""
    if before.grid != after.grid:
        raise UsageError("removed_fraction requires densities on identical grids")
    frac = 1.0 - after.integral / before.integral
    return float(min(max(frac, 0.0), 1.0))


def write_density_csv(density: SpectralDensity, path) -> None:
    """Two-column CSV: omega/2pi in MHz and density per MHz (of omega/2pi)."""
    w = density.grid.omegas()
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["omega_over_2pi_MHz", "rho_per_MHz"])
        for omega, rho in zip(w, density.values):
            writer.writerow([f"{omega / TWO_PI:.12g}", f"{rho * TWO_PI:.12g}"])


def symmetric_holes(center, offset, template: HoleSpec):
    """The pair of holes at center +- offset sharing ``template``'s shape."""
    return [
        replace(template, center=center - offset),
        replace(template, center=center + offset),
    ]
