# -*- coding: utf-8 -*-
"""Tests des potentiels habillés, de l'admixture et des fréquences de piégeage"""
import math

import numpy as np
import pytest

from conftest import OMEGA
from core.data_model import DressingField
from core.exceptions import DomainError
from core.lattice_core import AdmixtureWeighting, DressedLattice, LossKind, channel_coupling
from utils.units import HBAR


@pytest.fixture
def engine():
    return DressedLattice()


def closed_form_lower(detuning, omega_x):
    return 0.5 * (-detuning - np.sqrt(detuning ** 2 + omega_x ** 2))


# --- Profils ---

def test_rabi_profile_nodes_and_antinodes(engine):
    field = DressingField(omega_peak=1.0, detuning=0.0, wavenumber=1.0)
    assert engine.rabi_profile(field, math.pi / 2) == pytest.approx(1.0)
    assert engine.rabi_profile(field, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert engine.rabi_profile(field.with_phase(math.pi / 2), 0.0) == pytest.approx(1.0)


def test_stark_shift_is_uniform_in_quadrature(engine, lattice_factory):
    config = lattice_factory(phase=math.pi / 2)
    x = np.linspace(0.0, 2 * engine.lattice_period(config), 300)
    shift_g, shift_e = engine.stark_profiles(config, x)

    assert np.allclose(shift_g, 0.25 * OMEGA, rtol=1e-12)
    assert np.var(shift_g) / np.mean(shift_g) ** 2 <= 1e-12
    assert np.allclose(shift_e, 0.75 * OMEGA, rtol=1e-12)


def test_stark_shift_in_phase_doubles_at_antinode(engine, lattice_factory):
    config = lattice_factory(phase=0.0)
    k = config.wavenumber
    shift_g, _ = engine.stark_profiles(config, np.array([0.0, math.pi / (2 * k)]))
    assert shift_g[0] == pytest.approx(0.0, abs=1e-9)
    assert shift_g[1] == pytest.approx(0.5 * OMEGA, rel=1e-12)


# --- Potentiels ---

def test_resonant_antinode_splits_symmetrically(engine, lattice_factory):
    config = lattice_factory(detuning=0.0, include_offresonant=False)
    x = math.pi / (2 * config.wavenumber)
    sample = engine.adiabatic_potentials(config, 0, x)
    assert sample.v_lower == pytest.approx(-OMEGA / 2, rel=1e-12)
    assert sample.v_upper == pytest.approx(OMEGA / 2, rel=1e-12)


def test_node_potentials_follow_detuning(engine, lattice_factory):
    config = lattice_factory(include_offresonant=False)
    sample = engine.adiabatic_potentials(config, 0, 0.0)
    assert sample.v_lower == pytest.approx(0.0, abs=1e-9)
    assert sample.v_upper == pytest.approx(0.75 * OMEGA, rel=1e-12)


def test_closed_form_matches_diagonalisation(engine, lattice_factory):
    rng = np.random.default_rng(1234)
    for _ in range(1000):
        detuning = rng.uniform(-2.0, 2.0) * OMEGA
        omega = rng.uniform(0.1, 2.0) * OMEGA
        closed = lattice_factory(omega=omega, detuning=detuning, include_offresonant=False)
        numeric = lattice_factory(omega=omega, detuning=detuning, stark_g=0.0, stark_e=0.0)
        x = rng.uniform(0.0, engine.lattice_period(closed)) + 1e-3 * engine.lattice_period(closed)

        lo_c, up_c, adm_c = engine.potential_arrays(closed, 1, x)
        lo_n, up_n, adm_n = engine.potential_arrays(numeric, 1, x)
        scale = max(abs(detuning), omega)
        assert lo_c == pytest.approx(lo_n, rel=1e-12, abs=1e-12 * scale)
        assert up_c == pytest.approx(up_n, rel=1e-12, abs=1e-12 * scale)
        assert adm_c == pytest.approx(adm_n, abs=1e-9)
        assert 0.0 <= adm_n <= 1.0


def test_potentials_are_periodic(engine, lattice_factory):
    config = lattice_factory(phase=0.7)
    period = engine.lattice_period(config)
    x = np.linspace(0.0, period, 50)
    for spin in (0, 1):
        here = engine.potential_arrays(config, spin, x)
        shifted = engine.potential_arrays(config, spin, x + period)
        for a, b in zip(here, shifted):
            assert np.allclose(a, b, rtol=1e-10, atol=1e-10 * OMEGA)


def test_potential_scan_spins_coincide_in_phase(engine, lattice_factory):
    config = lattice_factory()
    rows = engine.potential_scan(config, [0.0])
    spin_0 = [row.sample.v_lower for row in rows if row.spin == 0]
    spin_1 = [row.sample.v_lower for row in rows if row.spin == 1]
    assert len(spin_0) == len(spin_1) == 256
    assert spin_0 == spin_1


def test_potential_scan_quadrature_matches_shifted_closed_form(engine, lattice_factory):
    config = lattice_factory()
    k = config.wavenumber
    rows = engine.potential_scan(config, [math.pi / 2])
    effective_detuning = -0.75 * OMEGA - 0.5 * OMEGA

    for row in rows:
        omega_x = OMEGA * math.sin(k * row.sample.x + (math.pi / 2 if row.spin == 1 else 0.0))
        expected = 0.25 * OMEGA + closed_form_lower(effective_detuning, omega_x)
        assert row.sample.v_lower == pytest.approx(expected, abs=1e-10 * OMEGA)


def test_potential_scan_row_order(engine, lattice_factory):
    config = lattice_factory()
    rows = engine.potential_scan(config, [math.pi / 2, 0.0])
    assert len(rows) == 2 * 2 * 256
    assert rows[0].phi == 0.0 and rows[0].spin == 0
    assert rows[256].spin == 1
    assert rows[512].phi == math.pi / 2
    xs = [row.sample.x for row in rows[:256]]
    assert xs == sorted(xs)


def test_potential_scan_rejects_bad_input(engine, lattice_factory):
    config = lattice_factory()
    with pytest.raises(DomainError):
        engine.potential_scan(config, [])
    with pytest.raises(DomainError):
        engine.potential_scan(config, [0.0], engine.lattice_grid(config, 32))
    with pytest.raises(DomainError):
        engine.potential_scan(config, [0.0], engine.lattice_grid(config, 512)[:256])


def test_in_phase_lattice_is_deeper(engine, lattice_factory):
    config = lattice_factory()
    assert engine.lattice_depth(config, 1, 0.0) > engine.lattice_depth(config, 1, math.pi / 2)


# --- Admixture ---

def test_resonant_admixture_is_one_half(engine, lattice_factory):
    config = lattice_factory(detuning=0.0, include_offresonant=False)
    assert engine.period_averaged_admixture(config, 1, 0.3) == pytest.approx(0.5, abs=1e-12)


def test_far_detuned_admixture_is_perturbative(engine, lattice_factory):
    detuning = -50.0 * OMEGA
    config = lattice_factory(detuning=detuning, include_offresonant=False)
    expected = OMEGA ** 2 / (8.0 * detuning ** 2)
    assert engine.period_averaged_admixture(config, 1, 0.0) == pytest.approx(expected, rel=5e-3)


@pytest.mark.parametrize("phase", [2 * math.pi * i / 32 for i in range(32)])
def test_admixture_decreases_with_detuning(engine, lattice_factory, phase):
    values = []
    for ratio in (0.5, 0.75, 1.0, 1.25):
        config = lattice_factory(detuning=-ratio * OMEGA)
        values.append(engine.period_averaged_admixture(config, 1, phase))
    assert all(a > b for a, b in zip(values, values[1:]))
    assert all(0.0 <= value <= 1.0 for value in values)


def test_density_weighted_admixture_resonant(engine, lattice_factory):
    config = lattice_factory(detuning=0.0, include_offresonant=False)
    weighted = engine.period_averaged_admixture(config, 1, 0.0, AdmixtureWeighting.GROUND_STATE_DENSITY)
    assert weighted == pytest.approx(0.5, abs=1e-12)


def test_admixture_scan_layout(engine, lattice_factory):
    config = lattice_factory()
    rows = engine.admixture_scan(config, [0.5, 0.0], [-0.5 * OMEGA, -OMEGA], spin=1, threads=2)
    assert len(rows) == 4
    assert [row[0] for row in rows] == [0.0, 0.5, 0.0, 0.5]
    assert [row[1] for row in rows] == [-0.5 * OMEGA] * 2 + [-OMEGA] * 2
    with pytest.raises(DomainError):
        engine.admixture_scan(config, [], [-OMEGA])


# --- Piégeage ---

@pytest.mark.parametrize("ratio", [0.0, 0.75])
def test_trap_frequency_matches_harmonic_expansion(engine, lattice_factory, species, ratio):
    detuning = -ratio * OMEGA
    config = lattice_factory(detuning=detuning, include_offresonant=False)
    root = math.hypot(detuning, OMEGA)
    curvature = OMEGA ** 2 * config.wavenumber ** 2 / (2.0 * root)
    expected = math.sqrt(HBAR * curvature / species.mass)

    omega_trap = engine.trap_frequency(config, 1)
    assert omega_trap == pytest.approx(expected, rel=1e-3)
    # ordre de grandeur attendu : quelques dizaines de kHz
    assert 7.5e3 <= omega_trap / (2 * math.pi) <= 30e3


def test_trap_frequency_scales_as_root_of_rabi(engine, lattice_factory):
    low = engine.trap_frequency(lattice_factory(detuning=0.0, include_offresonant=False), 0)
    high = engine.trap_frequency(lattice_factory(omega=4 * OMEGA, detuning=0.0, include_offresonant=False), 0)
    assert high / low == pytest.approx(2.0, rel=1e-3)


def test_flat_potential_has_no_confinement(engine, lattice_factory):
    config = lattice_factory(omega=0.0, include_offresonant=False)
    with pytest.raises(DomainError):
        engine.trap_frequency(config, 0)


# --- Non-adiabaticité ---

def test_loss_scaling(engine):
    assert engine.nonadiabatic_loss_scaling(LossKind.SINGLE_FREQUENCY, 0.0, 1.0) == 1.0
    single = engine.nonadiabatic_loss_scaling(LossKind.SINGLE_FREQUENCY, 3.0, 2.0)
    double = engine.nonadiabatic_loss_scaling(LossKind.TWO_FREQUENCY, 6.0, 2.0)
    assert double == pytest.approx(single ** 2, rel=1e-12)
    assert engine.nonadiabatic_loss_scaling("two-frequency", 550.0, 15.0) <= 1e-15
    with pytest.raises(DomainError):
        engine.nonadiabatic_loss_scaling(LossKind.SINGLE_FREQUENCY, 1.0, 0.0)


def test_uniform_coupling_does_not_mix_channels():
    def hamiltonian(x):
        return np.array([[0.0, 0.5], [0.5, 1.0]])
    assert channel_coupling(hamiltonian, 0.0, 1e-3, 1.0) == pytest.approx(0.0, abs=1e-9)


def test_channel_coupling_matches_mixing_angle(engine, lattice_factory):
    detuning = -0.5 * OMEGA
    config = lattice_factory(detuning=detuning, include_offresonant=False)
    k = config.wavenumber
    for fraction in (0.0, 0.1, 0.3, 0.45):
        x = fraction * engine.lattice_period(config)
        s, c = math.sin(k * x), math.cos(k * x)
        expected = abs(detuning * OMEGA * k * c) / (2.0 * (detuning ** 2 + (OMEGA * s) ** 2))
        assert engine.nonadiabatic_coupling(config, 0, x) == pytest.approx(expected, rel=1e-4)

    antinode = 0.5 * engine.lattice_period(config)
    assert engine.nonadiabatic_coupling(config, 0, antinode) < 1e-6 * k


def test_coupling_decreases_with_detuning(engine, lattice_factory):
    values = [engine.nonadiabatic_coupling(lattice_factory(detuning=-r * OMEGA, include_offresonant=False), 0, 0.0)
              for r in (0.5, 1.0, 2.0)]
    assert values[0] > values[1] > values[2]


def test_degenerate_channels_raise(engine, lattice_factory):
    config = lattice_factory(detuning=0.0, include_offresonant=False)
    with pytest.raises(DomainError):
        engine.nonadiabatic_coupling(config, 0, 0.0)


def test_resonant_coupling_peaks_at_node(engine, lattice_factory):
    # δ = 0, ondes confondues : écart diagonal Ω·sin², couplage Ω·sin
    config = lattice_factory(detuning=0.0)
    k, period = config.wavenumber, engine.lattice_period(config)
    for side in (1.0, -1.0):
        values = []
        for fraction in (0.25, 0.1, 0.05, 0.02):
            x = side * fraction * period
            s, c = math.sin(k * x), math.cos(k * x)
            value = engine.nonadiabatic_coupling(config, 0, x)
            assert value == pytest.approx(k * abs(c) / (2.0 * (1.0 + s ** 2)), rel=1e-4)
            values.append(value)
        assert all(a < b for a, b in zip(values, values[1:]))
