"""Physical constants (CODATA 2018) and unit conversions.

Internal convention: every interaction strength, Rabi frequency, shift and
linewidth is an ANGULAR frequency in rad/s. User-facing numbers are linear
MHz; the 2*pi lives in `mhz_to_angular` / `angular_to_mhz` and nowhere else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, asdict

TWO_PI = 2.0 * math.pi

# unified atomic mass unit [kg]
ATOMIC_MASS_KG = 1.66053906660e-27


@dataclass(frozen=True)
class PhysicalConstants:
    """Fundamental constants in SI units. All fields must be positive."""

    rydberg_constant: float = 2.1798723611035e-18  # Rydberg unit of energy [J]
    bohr_radius: float = 5.29177210903e-11         # [m]
    electron_charge: float = 1.602176634e-19       # [C]
    vacuum_permittivity: float = 8.8541878128e-12  # [F/m]
    boltzmann: float = 1.380649e-23                # [J/K]
    light_speed: float = 299792458.0               # [m/s]
    hbar: float = 1.054571817e-34                  # [J s]

    def __post_init__(self) -> None:
        for name, value in asdict(self).items():
            if not (value > 0.0 and math.isfinite(value)):
                raise ValueError(f"constant {name} must be finite and positive, got {value}")

    def as_dict(self) -> dict[str, float]:
        """Echo of the constant set, for run metadata."""
        return asdict(self)


CODATA = PhysicalConstants()


def mhz_to_angular(value_mhz: float) -> float:
    """Linear MHz -> angular rad/s."""
    return TWO_PI * 1e6 * value_mhz


def angular_to_mhz(value_rad_s: float) -> float:
    """Angular rad/s -> linear MHz."""
    return value_rad_s / (TWO_PI * 1e6)


def amu_to_kg(mass_amu: float) -> float:
    return mass_amu * ATOMIC_MASS_KG


UM = 1e-6
NM = 1e-9
US = 1e-6
