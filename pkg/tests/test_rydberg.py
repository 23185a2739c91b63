import math

import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from rydcluster.constants import CODATA, mhz_to_angular
from rydcluster.errors import DomainError
from rydcluster.rydberg import (
    ForsterChannel,
    RydbergLevel,
    binding_energy,
    dipole_dipole_potential,
    forster_potentials,
    permanent_dipole,
    radiative_lifetime,
    u3,
    vdw_shift,
)


class TestBindingEnergy:
    def test_hydrogenic_ground(self):
        level = RydbergLevel(n=1)
        assert binding_energy(level) == -CODATA.rydberg_constant

    def test_exact_quarter(self):
        level = RydbergLevel(n=2)
        assert binding_energy(level) == -CODATA.rydberg_constant / 4.0

    def test_rubidium_d_series(self):
        # direct arithmetic oracle: n* = 43 - 1.35 = 41.65
        level = RydbergLevel(n=43, l=2, quantum_defect=1.35, label="43D5/2")
        expected = -CODATA.rydberg_constant / 41.65**2
        assert binding_energy(level) == pytest.approx(expected, rel=1e-14)

    def test_nonpositive_effective_n_rejected(self):
        with pytest.raises(DomainError):
            RydbergLevel(n=2, quantum_defect=2.0)

    def test_monotone_in_n(self):
        energies = [
            binding_energy(RydbergLevel(n=n, quantum_defect=0.5)) for n in range(2, 80)
        ]
        assert all(b > a for a, b in zip(energies, energies[1:]))


class TestLifetime:
    def test_base_case(self):
        assert radiative_lifetime(RydbergLevel(n=1, base_lifetime=10e-9)) == 10e-9

    def test_millisecond_scale(self):
        # tau0 n^5 at n = 10 reaches the millisecond range
        assert radiative_lifetime(RydbergLevel(n=10, base_lifetime=10e-9)) == pytest.approx(1e-3)

    def test_n43(self):
        expected = 10e-9 * 43**5  # arithmetic oracle
        assert radiative_lifetime(RydbergLevel(n=43, base_lifetime=10e-9)) == expected


class TestPermanentDipole:
    def test_unit_case(self):
        assert permanent_dipole(1) == CODATA.electron_charge * CODATA.bohr_radius

    def test_n70(self):
        assert permanent_dipole(70) == pytest.approx(
            4900 * CODATA.electron_charge * CODATA.bohr_radius
        )

    def test_prefactor_linearity(self):
        assert permanent_dipole(2, prefactor=1.5) == pytest.approx(
            6 * CODATA.electron_charge * CODATA.bohr_radius
        )


class TestDipoleDipole:
    P = permanent_dipole(43)
    R = 5e-6

    def test_magic_angle(self):
        magic = math.acos(1.0 / math.sqrt(3.0))
        base = abs(dipole_dipole_potential(self.P, self.R, 0.0))
        assert abs(dipole_dipole_potential(self.P, self.R, magic)) < 1e-12 * base

    def test_head_to_tail(self):
        expected = (
            -2.0
            * self.P**2
            / (4.0 * math.pi * CODATA.vacuum_permittivity * self.R**3 * CODATA.hbar)
        )
        assert dipole_dipole_potential(self.P, self.R, 0.0) == pytest.approx(expected)

    def test_inverse_cube(self):
        side = dipole_dipole_potential(self.P, self.R, math.pi / 2.0)
        doubled = dipole_dipole_potential(self.P, 2.0 * self.R, math.pi / 2.0)
        assert doubled == pytest.approx(side / 8.0)

    def test_zero_separation_rejected(self):
        with pytest.raises(DomainError):
            dipole_dipole_potential(self.P, 0.0, 0.0)

    def test_angular_average_vanishes(self):
        # the sin-weighted average of (1 - 3 cos^2) over [0, pi] is zero
        value, _ = quad(
            lambda th: dipole_dipole_potential(self.P, self.R, th) * math.sin(th),
            0.0,
            math.pi,
        )
        scale = abs(dipole_dipole_potential(self.P, self.R, 0.0))
        assert abs(value) / scale < 1e-12


class TestU3:
    RHO = 1000 * CODATA.bohr_radius

    def test_forster_zero(self):
        channel = ForsterChannel(0.0, self.RHO, energy_defect=0.0)
        assert u3(channel, 1e-6) == 0.0

    def test_cubic_law(self):
        channel = ForsterChannel(self.RHO, self.RHO, energy_defect=0.0)
        assert u3(channel, 2e-6) == pytest.approx(u3(channel, 1e-6) / 8.0)

    def test_proportional_to_element_product(self):
        # ratio oracle: strength scales as rho1 rho2 / R^3
        base = u3(ForsterChannel(self.RHO, self.RHO, 0.0), 1e-6)
        scaled = u3(ForsterChannel(2.0 * self.RHO, 3.0 * self.RHO, 0.0), 1e-6)
        assert scaled == pytest.approx(6.0 * base)

    def test_zero_separation_rejected(self):
        with pytest.raises(DomainError):
            u3(ForsterChannel(self.RHO, self.RHO, 0.0), 0.0)


class TestForsterPotentials:
    def test_perfect_degeneracy(self):
        x = mhz_to_angular(1.0)
        plus, minus = forster_potentials(x, 0.0)
        assert plus == pytest.approx(2.0 * x / math.sqrt(3.0))
        assert minus == pytest.approx(-2.0 * x / math.sqrt(3.0))

    def test_no_coupling(self):
        delta = mhz_to_angular(2.0)
        plus, minus = forster_potentials(0.0, delta)
        assert plus == pytest.approx(delta)
        assert minus == pytest.approx(0.0, abs=1e-9)

    def test_equal_strengths(self):
        x = mhz_to_angular(1.0)
        plus, minus = forster_potentials(x, x)
        root = math.sqrt(4.0 / 3.0 + 0.25)  # arithmetic oracle
        assert plus == pytest.approx(x * (0.5 + root))
        assert minus == pytest.approx(x * (0.5 - root))

    @given(
        st.floats(min_value=-1e8, max_value=1e8),
        st.floats(min_value=-1e8, max_value=1e8),
    )
    def test_splitting_identity(self, u, d):
        plus, minus = forster_potentials(u, d)
        assert plus >= minus
        expected = 2.0 * math.sqrt(4.0 * u**2 / 3.0 + d**2 / 4.0)
        assert plus - minus == pytest.approx(expected, rel=1e-12, abs=1e-12)


class TestVdwShift:
    def test_inverse_sixth(self):
        c6 = mhz_to_angular(5.0) * (1e-6) ** 6
        assert vdw_shift(c6, 2e-6) == pytest.approx(vdw_shift(c6, 1e-6) / 64.0)

    def test_zero_coefficient(self):
        assert vdw_shift(0.0, 1e-6) == 0.0

    def test_unit_case(self):
        c6 = mhz_to_angular(1.0) * (1e-6) ** 6
        assert vdw_shift(c6, 1e-6) == pytest.approx(mhz_to_angular(1.0))

    def test_zero_separation_rejected(self):
        with pytest.raises(DomainError):
            vdw_shift(1.0, 0.0)


@given(st.floats(min_value=0.1, max_value=10.0))
def test_homogeneity_in_separation(k):
    # potentials scale as R^-3 (dipolar) and R^-6 (van der Waals)
    p = permanent_dipole(50)
    r = 3e-6
    vdd = dipole_dipole_potential(p, r, 1.0)
    assert dipole_dipole_potential(p, k * r, 1.0) == pytest.approx(vdd / k**3, rel=1e-10)

    channel = ForsterChannel(1e-8, 1e-8, 0.0)
    assert u3(channel, k * r) == pytest.approx(u3(channel, r) / k**3, rel=1e-10)

    c6 = mhz_to_angular(1.0) * (1e-6) ** 6
    assert vdw_shift(c6, k * r) == pytest.approx(vdw_shift(c6, r) / k**6, rel=1e-10)
