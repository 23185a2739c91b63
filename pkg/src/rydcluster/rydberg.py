"""Closed-form Rydberg interaction physics.

Binding energies, radiative lifetimes, permanent dipole scaling, the
angle-dependent dipole-dipole potential, Foerster-enhanced pair potentials
and van der Waals shifts. Pure functions of value inputs; safe to call from
any number of workers.

Every returned interaction strength is an angular frequency (rad/s); see
`constants` for the boundary conversion to linear MHz.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .constants import CODATA, PhysicalConstants
from .errors import DomainError


@dataclass(frozen=True)
class RydbergLevel:
    """A single Rydberg level with its empirical inputs.

    Quantum defect and base lifetime are configuration inputs, not computed
    from atomic structure.
    """

    n: int
    l: int = 0
    quantum_defect: float = 0.0
    base_lifetime: float = 10e-9  # typical low-n lifetime [s]
    label: str = ""

    def __post_init__(self) -> None:
        if self.n < 1:
            raise DomainError(f"principal quantum number must be >= 1, got {self.n}")
        if not (0 <= self.l < self.n):
            raise DomainError(f"require 0 <= l < n, got l={self.l}, n={self.n}")
        if self.quantum_defect < 0:
            raise DomainError("quantum defect must be >= 0")
        if self.effective_n <= 0:
            raise DomainError(
                f"effective quantum number n - defect = {self.effective_n} must be positive"
            )

    @property
    def effective_n(self) -> float:
        return self.n - self.quantum_defect


@dataclass(frozen=True)
class ForsterChannel:
    """One resonant pair channel nl + nl -> n'l' + n''l''.

    Radial matrix elements are given in metres (dipole length); the energy
    defect of the channel is an angular frequency and may have either sign.
    """

    radial_element_1: float
    radial_element_2: float
    energy_defect: float


def binding_energy(level: RydbergLevel, constants: PhysicalConstants = CODATA) -> float:
    """Energy of the level below the ionization limit: -R / (n - defect)^2 [J]."""
    n_star = level.effective_n
    if n_star <= 0:
        raise DomainError("effective quantum number must be positive")
    return -constants.rydberg_constant / n_star**2


def radiative_lifetime(level: RydbergLevel) -> float:
    """Radiative lifetime tau0 * n^5 [s]."""
    if level.base_lifetime <= 0:
        raise DomainError("base lifetime must be positive")
    return level.base_lifetime * level.n**5


def permanent_dipole(
    n: int, constants: PhysicalConstants = CODATA, prefactor: float = 1.0
) -> float:
    """Permanent dipole moment of a polarized Rydberg atom, prefactor * q a0 n^2 [C m]."""
    if n < 1:
        raise DomainError(f"principal quantum number must be >= 1, got {n}")
    return prefactor * constants.electron_charge * constants.bohr_radius * n**2


def dipole_dipole_potential(
    p: float,
    separation: float,
    angle: float,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Static dipole-dipole potential between two polarized atoms.

    p^2 (1 - 3 cos^2 theta) / (4 pi eps0 R^3), returned as an angular
    frequency. Vanishes at the magic angle cos^2 theta = 1/3 and is negative
    for head-to-tail alignment (theta = 0).
    """
    if separation <= 0:
        raise DomainError(f"separation must be positive, got {separation}")
    geometry = 1.0 - 3.0 * math.cos(angle) ** 2
    energy = p**2 * geometry / (4.0 * math.pi * constants.vacuum_permittivity * separation**3)
    return energy / constants.hbar


def u3(
    channel: ForsterChannel,
    separation: float,
    constants: PhysicalConstants = CODATA,
) -> float:
    """Dipolar coupling strength of a Foerster channel, q^2 rho1 rho2 / (4 pi eps0 R^3 hbar).

    Zero whenever either radial element vanishes (a Foerster zero, C3 = 0).
    """
    if separation <= 0:
        raise DomainError(f"separation must be positive, got {separation}")
    energy = (
        constants.electron_charge**2
        * channel.radial_element_1
        * channel.radial_element_2
        / (4.0 * math.pi * constants.vacuum_permittivity * separation**3)
    )
    return energy / constants.hbar


def forster_potentials(u3_value: float, energy_defect: float) -> tuple[float, float]:
    """Eigen-shifts of the two-atom Foerster pair, V+- = d/2 +- sqrt(4 u3^2/3 + d^2/4).

    V+ >= V- for all inputs. For perfect degeneracy (d = 0) the pair splits
    symmetrically by 2 u3 / sqrt(3) on each side.
    """
    root = math.sqrt(4.0 * u3_value**2 / 3.0 + energy_defect**2 / 4.0)
    return energy_defect / 2.0 + root, energy_defect / 2.0 - root


def vdw_shift(c6: float, separation: float) -> float:
    """Van der Waals shift C6 / R^6; c6 in rad/s m^6, separation in m."""
    if separation <= 0:
        raise DomainError(f"separation must be positive, got {separation}")
    return c6 / separation**6
