#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Registre de spins nucléaires
Échelles de résonances Zeeman, déplacements tensoriels de ³P₂ et
adressage site par site par gradient magnétique.
"""
import logging
import math
from fractions import Fraction
from typing import Optional, Tuple

from core.data_model import (AddressabilityReport, GradientConfig, HyperfineState, PolarizabilityInput,
                             PolarizabilityShift, SelectivityReport, Species, ZeemanConfig)
from core.exceptions import DomainError
from utils.units import TWO_PI, m_to_cm

DEFAULT_SELECTIVITY_THRESHOLD = 10.0
DEFAULT_BAND_FACTOR = 10.0
SIMILAR_DEPTH_FACTOR = 2.0


class SpinRegister:
    """Arithmétique du registre : Zeeman, polarisabilité, gradient"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)

    # --- Résonances Zeeman ---

    def _check_m_i(self, species: Species, m_i) -> Fraction:
        m_i = Fraction(m_i)
        spin = species.nuclear_spin
        if abs(m_i) > spin:
            raise DomainError(f"|m_I| = {abs(m_i)} dépasse I = {spin}")
        if (spin - m_i).denominator != 1:
            raise DomainError(f"m_I = {m_i} n'appartient pas à l'échelle -I..I par pas entiers")
        return m_i

    def resonance_offset(self, config: ZeemanConfig, m_i) -> float:
        """
        Décalage de la résonance |g,m_I⟩→|e,m_I⟩ par rapport à l'horloge à champ nul

        Modèle linéaire m_I·ζ·B, sans terme quadratique.

        Returns:
            Décalage en Hz
        """
        m_i = self._check_m_i(config.species, m_i)
        return float(m_i) * config.species.zeeman_coefficient * config.field_B

    def qubit_spacing(self, config: ZeemanConfig) -> float:
        m_a, m_b = config.qubit_mI_pair
        return abs(self.resonance_offset(config, m_a) - self.resonance_offset(config, m_b))

    def lattice_frequency_difference(self, config: ZeemanConfig) -> float:
        """ω_diff entre les deux réseaux de qubits (rad/s)"""
        return TWO_PI * self.qubit_spacing(config)

    def selectivity_margin(self, config: ZeemanConfig, omega: float,
                           threshold: float = DEFAULT_SELECTIVITY_THRESHOLD) -> SelectivityReport:
        if omega < 0:
            raise DomainError("La fréquence de Rabi doit être positive")
        spacing_hz = self.qubit_spacing(config)
        ratio = math.inf if omega == 0 else TWO_PI * spacing_hz / omega
        return SelectivityReport(spacing_hz=spacing_hz, ratio=ratio, threshold=threshold,
                                 selective=ratio >= threshold)

    def required_field(self, species: Species, omega: float, qubit_mI_pair: Tuple,
                       threshold: float = DEFAULT_SELECTIVITY_THRESHOLD) -> float:
        """Champ B (G) donnant exactement le rapport de sélectivité demandé"""
        m_a, m_b = (self._check_m_i(species, m) for m in qubit_mI_pair)
        if m_a == m_b:
            raise DomainError("La paire de qubits doit contenir deux valeurs de m_I distinctes")
        return threshold * omega / (TWO_PI * float(abs(m_a - m_b)) * species.zeeman_coefficient)

    # --- Polarisabilité tensorielle ---

    def tensor_coefficient(self, state: HyperfineState) -> Fraction:
        F, m_F = state.F, state.m_F
        denominator = F * (2 * F - 1)
        if denominator == 0:
            raise DomainError(f"Coefficient tensoriel indéfini pour F = {F} (tensor coefficient undefined)")
        return (3 * m_F ** 2 - F * (F + 1)) / denominator

    def polarizability_shift(self, state: HyperfineState, polarizability: PolarizabilityInput,
                             reference_depth_hz: Optional[float] = None) -> PolarizabilityShift:
        """
        Déplacement hΔ_E = -(α_s + α_t·C(F, m_F))·E²/2

        Args:
            state: Sous-niveau hyperfin de ³P₂
            polarizability: α_s, α_t (Hz par unité de E²) et E²
            reference_depth_hz: Profondeur du réseau habillé pour comparaison (optionnel)

        Returns:
            Déplacement en Hz, polarisabilité totale et diagnostic de piégeage
        """
        coefficient = self.tensor_coefficient(state)
        total = polarizability.alpha_scalar + polarizability.alpha_tensor * float(coefficient)
        shift = -total * polarizability.field_sq / 2.0

        depth_ratio = similar = None
        if reference_depth_hz:
            depth_ratio = abs(shift) / abs(reference_depth_hz)
            similar = 1.0 / SIMILAR_DEPTH_FACTOR <= depth_ratio <= SIMILAR_DEPTH_FACTOR

        return PolarizabilityShift(shift_hz=shift, total_polarizability=total, tensor_coefficient=coefficient,
                                   trapped_at_dressed_minima=total < 0, depth_ratio=depth_ratio,
                                   similar_depth=similar)

    # --- Adressage par gradient ---

    def site_spacing(self, grad: GradientConfig, species: Species) -> float:
        return grad.site_spacing if grad.site_spacing is not None else species.clock_wavelength / 2.0

    def gradient_site_splitting(self, grad: GradientConfig, species: Species) -> float:
        """Écart d'énergie (Hz) entre atomes de sites voisins"""
        return species.p2_gradient_coefficient * grad.dB_dx * m_to_cm(self.site_spacing(grad, species))

    def readout_addressability(self, grad: GradientConfig, species: Species, omega: float, raman_rabi: float,
                               band_factor: float = DEFAULT_BAND_FACTOR) -> AddressabilityReport:
        if not omega > 0 or not raman_rabi > 0:
            raise DomainError("ω et la fréquence de Rabi Raman doivent être strictement positives")

        splitting_hz = self.gradient_site_splitting(grad, species)
        site_resolvable = raman_rabi < TWO_PI * splitting_hz
        band_safe = raman_rabi < omega / band_factor
        report = AddressabilityReport(
            site_splitting_hz=splitting_hz,
            energy_gradient_hz_per_cm=species.p2_gradient_coefficient * grad.dB_dx,
            site_spacing_m=self.site_spacing(grad, species),
            raman_rabi_rad_s=raman_rabi,
            trap_frequency_rad_s=omega,
            band_factor=band_factor,
            site_resolvable=site_resolvable,
            band_safe=band_safe,
            min_readout_time_s=TWO_PI / raman_rabi,
            band_period_s=TWO_PI / omega,
            addressable=site_resolvable and band_safe,
        )
        if not report.addressable:
            self.logger.warning(f"Adressage impossible : résolution={site_resolvable}, bandes={band_safe}")
        return report
