"""Unit conventions.

All library code works in angular frequency (rad/us) and time (us).
Configuration files and the paper-style constants quote frequencies as
omega/2pi in MHz (or GHz); conversion happens once at ingestion.
"""

import numpy as np

TWO_PI = 2.0 * np.pi


def omega_from_mhz(f_mhz):
    """Angular frequency (rad/us) of a line quoted as omega/2pi in MHz."""
    return TWO_PI * np.asarray(f_mhz, dtype=float)[()]


def omega_from_ghz(f_ghz):
    """Angular frequency (rad/us) of a line quoted as omega/2pi in GHz."""
    return TWO_PI * 1.0e3 * np.asarray(f_ghz, dtype=float)[()]


def mhz_from_omega(omega):
    """omega/2pi in MHz for an angular frequency in rad/us."""
    return np.asarray(omega, dtype=float)[()] / TWO_PI
