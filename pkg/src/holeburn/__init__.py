"""Cavity QED with an inhomogeneously broadened spin ensemble.

Simulates a single-mode cavity strongly coupled to a spin ensemble with a
q-Gaussian frequency distribution, and the suppression of decoherence
obtained by burning two narrow spectral holes into that distribution.
"""

from .analysis import (
    DecayFit,
    fit_decay_rate,
    gamma_estimate,
    peak_enhancement,
    rabi_splitting,
    write_fit_report,
)
from .config import ExperimentConfig, load_config, write_effective_config
from .dynamics import (
    ComplexTimeSeries,
    DriveSignal,
    KernelTable,
    RealTimeSeries,
    build_kernel,
    make_pulse_train,
    single_photon_decay,
    solve_spin_bins,
    solve_volterra,
    write_kernel_csv,
    write_timeseries_csv,
)
from .errors import (
    ConfigurationError,
    DomainError,
    HoleburnError,
    InsufficientDataError,
    NumericalInstabilityError,
    ResolutionError,
    UsageError,
)
from .response import (
    HoleScanMap,
    Resonance,
    TransmissionSpectrum,
    find_resonances,
    hole_scan,
    lamb_shift,
    lamb_shift_many,
    transmission,
    transmission_spectrum,
    write_scan_csv,
    write_spectrum_csv,
)
from .spectral import (
    DEFAULT_GAMMA,
    NOTCH_Q,
    FrequencyGrid,
    HoleProfile,
    HoleSpec,
    QGaussianSpec,
    SpectralDensity,
    SystemParams,
    build_q_gaussian,
    burn_holes,
    hole_mask,
    removed_fraction,
    symmetric_holes,
    write_density_csv,
)
from .units import TWO_PI, mhz_from_omega, omega_from_ghz, omega_from_mhz

__version__ = "0.1.0"
