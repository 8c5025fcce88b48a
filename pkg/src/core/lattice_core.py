#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Potentiels adiabatiques habillés
Potentiels V±(x), contributions hors résonance, admixture de |e⟩,
fréquences de piégeage et couplages non adiabatiques pour les deux
réseaux dépendant du spin nucléaire.
"""
import logging
from dataclasses import replace
from enum import Enum
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np
from scipy.optimize import minimize_scalar

from core.data_model import DressingField, LatticeConfig, PotentialSample, ScanRow
from core.exceptions import DomainError
from utils.parallel import parallel_map
from utils.units import HBAR

COARSE_POINTS = 256
CURVATURE_DIVISIONS = 4096
MIN_POINTS_PER_PERIOD = 64


class LossKind(Enum):
    SINGLE_FREQUENCY = "single-frequency"
    TWO_FREQUENCY = "two-frequency"


class AdmixtureWeighting(Enum):
    UNIFORM = "uniform"
    GROUND_STATE_DENSITY = "density"


def channel_coupling(hamiltonian: Callable[[float], np.ndarray], x: float, step: float, scale: float) -> float:
    """
    Couplage |⟨Ψ+|d/dx Ψ-⟩| par différences finies des vecteurs propres

    Args:
        hamiltonian: H(x) réel symétrique 2×2 (rad/s)
        x: Position (m)
        step: Pas des différences finies (m)
        scale: Échelle d'énergie pour le test de dégénérescence

    Returns:
        Couplage entre canaux (1/m)
    """
    values, vectors = np.linalg.eigh(hamiltonian(x))
    if values[1] - values[0] < 1e-12 * scale:
        raise DomainError(f"Canaux dégénérés en x={x:.6e} m : couplage non adiabatique indéfini")

    lower = vectors[:, 0]
    neighbours = []
    for shifted in (x + step, x - step):
        shifted_lower = np.linalg.eigh(hamiltonian(shifted))[1][:, 0]
        # jauge : même signe que le vecteur central
        if np.dot(shifted_lower, lower) < 0:
            shifted_lower = -shifted_lower
        neighbours.append(shifted_lower)

    derivative = (neighbours[0] - neighbours[1]) / (2.0 * step)
    return float(abs(np.dot(vectors[:, 1], derivative)))


class DressedLattice:
    """Calculateur des réseaux habillés sur la transition d'horloge"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.debug_logger = logging.getLogger('debug_trace')

    # --- Profils spatiaux ---

    def rabi_profile(self, field: DressingField, x):
        return field.omega_peak * np.sin(field.wavenumber * np.asarray(x, dtype=float) + field.phase)

    def stark_profiles(self, config: LatticeConfig, x) -> Tuple[np.ndarray, np.ndarray]:
        """
        Déplacements AC-Stark hors résonance vus par chaque atome

        Chaque atome voit l'intensité sommée des deux ondes stationnaires,
        indépendamment de son spin nucléaire.
        """
        x = np.asarray(x, dtype=float)
        if not config.include_offresonant:
            zeros = np.zeros_like(x)
            return zeros, zeros.copy()

        k = config.wavenumber
        intensity = np.sin(k * x + config.field_0.phase) ** 2 + np.sin(k * x + config.field_1.phase) ** 2
        return config.stark.ac_shift_g_peak * intensity, config.stark.ac_shift_e_peak * intensity

    def lattice_period(self, config: LatticeConfig) -> float:
        return np.pi / config.wavenumber

    def lattice_grid(self, config: LatticeConfig, points_per_period: int = COARSE_POINTS,
                     periods: int = 1) -> np.ndarray:
        period = self.lattice_period(config)
        return np.arange(points_per_period * periods) * (period / points_per_period)

    # --- Potentiels adiabatiques ---

    def _check_config(self, config: LatticeConfig):
        values = (config.field_0.omega_peak, config.field_0.detuning, config.field_0.phase,
                  config.field_1.omega_peak, config.field_1.detuning, config.field_1.phase,
                  config.stark.ac_shift_g_peak, config.stark.ac_shift_e_peak)
        if not np.all(np.isfinite(values)):
            raise DomainError("Paramètres de réseau non finis")

    def _check_positions(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        if not np.all(np.isfinite(x)):
            raise DomainError("Positions non finies")
        return x

    def _energy_scale(self, config: LatticeConfig) -> float:
        return max(abs(config.field_0.omega_peak), abs(config.field_0.detuning),
                   abs(config.field_1.omega_peak), abs(config.field_1.detuning),
                   abs(config.stark.ac_shift_g_peak), abs(config.stark.ac_shift_e_peak))

    def hamiltonian(self, config: LatticeConfig, spin: int, x) -> np.ndarray:
        """H(x) dans la base (|g⟩, |e⟩), de forme x.shape + (2, 2)"""
        x = np.asarray(x, dtype=float)
        field = config.field_for(spin)
        coupling = 0.5 * self.rabi_profile(field, x)
        shift_g, shift_e = self.stark_profiles(config, x)

        matrix = np.empty(x.shape + (2, 2))
        matrix[..., 0, 0] = shift_g
        matrix[..., 1, 1] = -field.detuning + shift_e
        matrix[..., 0, 1] = coupling
        matrix[..., 1, 0] = coupling
        return matrix

    def potential_arrays(self, config: LatticeConfig, spin: int, x) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        """
        V-, V+ et admixture de |e⟩ dans l'état habillé inférieur

        Args:
            config: Configuration du réseau
            spin: Qubit (0 ou 1)
            x: Positions (m), scalaire ou tableau

        Returns:
            (v_lower, v_upper, admixture_e) en rad/s et probabilité
        """
        self._check_config(config)
        x = self._check_positions(x)
        field = config.field_for(spin)

        if not config.include_offresonant:
            omega_x = self.rabi_profile(field, x)
            root = np.sqrt(field.detuning ** 2 + omega_x ** 2)
            v_lower = 0.5 * (-field.detuning - root)
            v_upper = 0.5 * (-field.detuning + root)
            ratio = np.divide(field.detuning, root, out=np.zeros_like(root), where=root > 0)
            return v_lower, v_upper, 0.5 * (1.0 + ratio)

        values, vectors = np.linalg.eigh(self.hamiltonian(config, spin, x))
        v_lower = values[..., 0]
        v_upper = values[..., 1]
        admixture = np.abs(vectors[..., 1, 0]) ** 2
        degenerate = (v_upper - v_lower) <= 1e-15 * max(self._energy_scale(config), 1e-300)
        admixture = np.where(degenerate, 0.5, admixture)
        return v_lower, v_upper, admixture

    def adiabatic_potentials(self, config: LatticeConfig, spin: int, x: float) -> PotentialSample:
        v_lower, v_upper, admixture = self.potential_arrays(config, spin, x)
        return PotentialSample(x=float(x), v_lower=float(v_lower), v_upper=float(v_upper),
                               admixture_e=float(admixture))

    # --- Balayages ---

    def _check_grid(self, config: LatticeConfig, grid) -> np.ndarray:
        grid = np.sort(self._check_positions(grid).ravel())
        if grid.size == 0:
            raise DomainError("La grille de positions est vide")
        if grid.size < 2:
            raise DomainError("La grille doit contenir au moins deux points")

        period = self.lattice_period(config)
        spacing = float(np.median(np.diff(grid)))
        coverage = float(grid[-1] - grid[0]) + spacing
        if coverage < period * (1.0 - 1e-9):
            raise DomainError(f"La grille couvre {coverage / period:.3f} période(s), au moins une est requise")
        if grid.size / (coverage / period) < MIN_POINTS_PER_PERIOD:
            raise DomainError(f"Au moins {MIN_POINTS_PER_PERIOD} points par période sont requis")
        return grid

    def potential_scan(self, config: LatticeConfig, phases: Sequence[float], grid=None,
                       threads: int = 1) -> List[ScanRow]:
        """
        Potentiels des deux spins pour chaque phase relative φ

        Le champ du qubit 0 garde la phase 0, celui du qubit 1 reçoit φ.
        Ordre des lignes : φ croissant, puis spin, puis x croissant.
        """
        phases = sorted(float(phase) for phase in phases)
        if not phases:
            raise DomainError("La liste des phases doit être non vide")
        if not np.all(np.isfinite(phases)):
            raise DomainError("Phases non finies")
        grid = self.lattice_grid(config) if grid is None else self._check_grid(config, grid)

        self.debug_logger.info(f"--- Balayage des potentiels : {len(phases)} phase(s), {grid.size} points ---")

        def scan_phase(phase: float) -> List[ScanRow]:
            shifted = config.with_relative_phase(phase)
            rows = []
            for spin in (0, 1):
                v_lower, v_upper, admixture = self.potential_arrays(shifted, spin, grid)
                rows.extend(
                    ScanRow(phase, spin, PotentialSample(float(x), float(lo), float(up), float(adm)))
                    for x, lo, up, adm in zip(grid, v_lower, v_upper, admixture)
                )
            return rows

        blocks = parallel_map(scan_phase, phases, threads)
        return [row for block in blocks for row in block]

    def lattice_depth(self, config: LatticeConfig, spin: int, relative_phase: Optional[float] = None) -> float:
        if relative_phase is not None:
            config = config.with_relative_phase(relative_phase)
        v_lower = self.potential_arrays(config, spin, self.lattice_grid(config, 1024))[0]
        return float(np.max(v_lower) - np.min(v_lower))

    # --- Admixture de l'état excité ---

    def period_averaged_admixture(self, config: LatticeConfig, spin: int, relative_phase: float,
                                  weighting: AdmixtureWeighting = AdmixtureWeighting.UNIFORM,
                                  points: int = 512) -> float:
        """
        Admixture de |e⟩ dans l'état habillé inférieur, moyennée sur une période

        Args:
            config: Configuration du réseau
            spin: Qubit (0 ou 1)
            relative_phase: Phase φ appliquée au champ du qubit 1
            weighting: Moyenne uniforme en x (défaut) ou pondérée par la densité
                de l'état fondamental harmonique centré sur le minimum de V-
            points: Nombre de points sur la période

        Returns:
            Probabilité moyenne dans [0, 1]
        """
        shifted = config.with_relative_phase(relative_phase)
        grid = self.lattice_grid(shifted, points)
        admixture = self.potential_arrays(shifted, spin, grid)[2]

        if weighting is AdmixtureWeighting.UNIFORM:
            return float(np.mean(admixture))

        period = self.lattice_period(shifted)
        x_min = self.locate_minimum(shifted, spin)[0]
        omega = self.trap_frequency(shifted, spin)
        sigma_sq = HBAR / (2.0 * shifted.species.mass * omega)
        weights = sum(np.exp(-(grid - x_min - n * period) ** 2 / (2.0 * sigma_sq)) for n in range(-3, 4))
        return float(np.sum(weights * admixture) / np.sum(weights))

    def admixture_scan(self, config: LatticeConfig, phases: Sequence[float], detunings: Sequence[float],
                       spin: int = 1, weighting: AdmixtureWeighting = AdmixtureWeighting.UNIFORM,
                       threads: int = 1) -> List[Tuple[float, float, int, float]]:
        """Famille de courbes admixture(φ) pour plusieurs désaccords δ (appliqués aux deux champs)"""
        phases = sorted(float(phase) for phase in phases)
        if not phases or not len(detunings):
            raise DomainError("Les listes de phases et de désaccords doivent être non vides")

        def scan_detuning(detuning: float):
            tuned = replace(config, field_0=replace(config.field_0, detuning=float(detuning)),
                            field_1=replace(config.field_1, detuning=float(detuning)))
            return [(phase, float(detuning), spin, self.period_averaged_admixture(tuned, spin, phase, weighting))
                    for phase in phases]

        blocks = parallel_map(scan_detuning, list(detunings), threads)
        return [row for block in blocks for row in block]

    # --- Fréquence de piégeage ---

    def locate_minimum(self, config: LatticeConfig, spin: int) -> Tuple[float, float]:
        """Minimum de V- : balayage grossier puis affinement par section dorée"""
        period = self.lattice_period(config)
        grid = self.lattice_grid(config, COARSE_POINTS)
        v_lower = self.potential_arrays(config, spin, grid)[0]

        scale = self._energy_scale(config)
        if scale == 0.0 or np.ptp(v_lower) <= 1e-12 * scale:
            raise DomainError("Aucun confinement : le potentiel inférieur est plat (no confinement)")

        def lower(x: float) -> float:
            return float(self.potential_arrays(config, spin, x)[0])

        index = int(np.argmin(v_lower))
        dx = period / COARSE_POINTS
        try:
            result = minimize_scalar(lower, bracket=(grid[index] - dx, grid[index], grid[index] + dx),
                                     method="golden")
        except ValueError:
            result = minimize_scalar(lower, bracket=(grid[index] - dx, grid[index] + dx), method="golden")

        self.debug_logger.info(f"    Minimum de V- (spin {spin}) en x={result.x:.9e} m")
        return float(result.x), float(result.fun)

    def potential_curvature(self, config: LatticeConfig, spin: int, x0: float) -> float:
        """Dérivée seconde de V- (rad/s/m²) par différence centrée à 5 points"""
        h = self.lattice_period(config) / CURVATURE_DIVISIONS
        offsets = x0 + h * np.arange(-2, 3)
        v = self.potential_arrays(config, spin, offsets)[0]
        return float((-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h))

    def trap_frequency(self, config: LatticeConfig, spin: int) -> float:
        """
        Fréquence de piégeage harmonique ω = √(ħ·κ/m) au minimum de V-

        Returns:
            Pulsation de piégeage (rad/s)
        """
        x0, _ = self.locate_minimum(config, spin)
        curvature = self.potential_curvature(config, spin, x0)
        if curvature <= 0:
            raise DomainError("Aucun confinement : courbure non positive au minimum (no confinement)")
        omega = float(np.sqrt(HBAR * curvature / config.species.mass))
        self.logger.info(f"Fréquence de piégeage (spin {spin}) : {omega / (2 * np.pi):.1f} Hz")
        return omega

    # --- Pertes et couplages non adiabatiques ---

    def nonadiabatic_loss_scaling(self, kind: LossKind, numerator: float, omega: float,
                                  prefactor: float = 1.0) -> float:
        """Facteur exp(-numérateur/ω) ; le préfacteur n'est pas calculé et vaut 1 par défaut"""
        kind = LossKind(kind)
        if not omega > 0:
            raise DomainError("La fréquence de piégeage doit être strictement positive")
        return float(prefactor * np.exp(-numerator / omega))

    def nonadiabatic_coupling(self, config: LatticeConfig, spin: int, x: float,
                              step: Optional[float] = None) -> float:
        self._check_config(config)
        x = float(self._check_positions(x))
        if step is None:
            step = self.lattice_period(config) / CURVATURE_DIVISIONS
        scale = max(self._energy_scale(config), 1e-300)
        return channel_coupling(lambda position: self.hamiltonian(config, spin, position), x, step, scale)
