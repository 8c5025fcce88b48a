#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Modèle de Données
Unités internes : énergies en rad/s, longueurs en m, champs en gauss.
"""
from dataclasses import dataclass, field, replace
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

import numpy as np

from core.exceptions import DomainError


# --- Réseau habillé ---

@dataclass(frozen=True)
class Species:
    mass: float
    clock_wavelength: float
    zeeman_coefficient: float
    p2_gradient_coefficient: float
    nuclear_spin: Fraction
    name: str = ""

    def __post_init__(self):
        if not self.mass > 0:
            raise DomainError("La masse doit être strictement positive")
        if not self.clock_wavelength > 0:
            raise DomainError("La longueur d'onde d'horloge doit être strictement positive")
        spin = Fraction(self.nuclear_spin)
        if spin < Fraction(1, 2) or (2 * spin).denominator != 1:
            raise DomainError(f"Spin nucléaire invalide: {self.nuclear_spin}")
        object.__setattr__(self, "nuclear_spin", spin)

    @property
    def wavenumber(self) -> float:
        return 2 * np.pi / self.clock_wavelength


@dataclass(frozen=True)
class DressingField:
    omega_peak: float
    detuning: float
    wavenumber: float
    phase: float = 0.0
    spin_label: int = 0

    def __post_init__(self):
        if not self.omega_peak >= 0:
            raise DomainError("La fréquence de Rabi crête doit être positive ou nulle")
        if not self.wavenumber > 0:
            raise DomainError("Le nombre d'onde doit être strictement positif")
        if self.spin_label not in (0, 1):
            raise DomainError(f"Étiquette de qubit invalide: {self.spin_label}")

    def with_phase(self, phase: float) -> "DressingField":
        return replace(self, phase=phase)


@dataclass(frozen=True)
class StarkConfig:
    ac_shift_g_peak: float = 0.0
    ac_shift_e_peak: float = 0.0


@dataclass(frozen=True)
class LatticeConfig:
    species: Species
    field_0: DressingField
    field_1: DressingField
    stark: StarkConfig = field(default_factory=StarkConfig)
    include_offresonant: bool = True

    def __post_init__(self):
        if not np.isclose(self.field_0.wavenumber, self.field_1.wavenumber, rtol=1e-12, atol=0.0):
            raise DomainError("Les deux champs d'habillage doivent partager le même nombre d'onde")
        if self.field_0.spin_label == self.field_1.spin_label:
            raise DomainError("Les étiquettes de spin des deux champs doivent être distinctes")

    @property
    def wavenumber(self) -> float:
        return self.field_0.wavenumber

    def field_for(self, spin: int) -> DressingField:
        if spin == self.field_0.spin_label:
            return self.field_0
        if spin == self.field_1.spin_label:
            return self.field_1
        raise DomainError(f"Étiquette de qubit invalide: {spin}")

    def with_relative_phase(self, phase: float) -> "LatticeConfig":
        return replace(self, field_0=self.field_0.with_phase(0.0), field_1=self.field_1.with_phase(phase))


@dataclass(frozen=True)
class PotentialSample:
    x: float
    v_lower: float
    v_upper: float
    admixture_e: float


@dataclass(frozen=True)
class ScanRow:
    phi: float
    spin: int
    sample: PotentialSample


# --- Registre de spins ---

@dataclass(frozen=True)
class ZeemanConfig:
    field_B: float
    species: Species
    qubit_mI_pair: Tuple[Fraction, Fraction]

    def __post_init__(self):
        if not self.field_B >= 0:
            raise DomainError("Le champ magnétique doit être positif ou nul")
        pair = tuple(Fraction(m) for m in self.qubit_mI_pair)
        if len(pair) != 2 or pair[0] == pair[1]:
            raise DomainError("La paire de qubits doit contenir deux valeurs de m_I distinctes")
        for m in pair:
            if abs(m) > self.species.nuclear_spin:
                raise DomainError(f"|m_I| = {abs(m)} dépasse I = {self.species.nuclear_spin}")
        object.__setattr__(self, "qubit_mI_pair", pair)


@dataclass(frozen=True)
class HyperfineState:
    F: Fraction
    m_F: Fraction

    def __post_init__(self):
        F, m_F = Fraction(self.F), Fraction(self.m_F)
        if F < Fraction(1, 2) or (2 * F).denominator != 1:
            raise DomainError(f"F invalide: {self.F}")
        if abs(m_F) > F or (F - m_F).denominator != 1:
            raise DomainError(f"m_F = {m_F} incompatible avec F = {F}")
        object.__setattr__(self, "F", F)
        object.__setattr__(self, "m_F", m_F)


@dataclass(frozen=True)
class PolarizabilityInput:
    alpha_scalar: float
    alpha_tensor: float
    field_sq: float

    def __post_init__(self):
        if not self.field_sq >= 0:
            raise DomainError("E² doit être positif ou nul")


@dataclass(frozen=True)
class PolarizabilityShift:
    shift_hz: float
    total_polarizability: float
    tensor_coefficient: Fraction
    trapped_at_dressed_minima: bool
    depth_ratio: Optional[float] = None
    similar_depth: Optional[bool] = None


@dataclass(frozen=True)
class GradientConfig:
    dB_dx: float
    site_spacing: Optional[float] = None

    def __post_init__(self):
        if self.site_spacing is not None and not self.site_spacing > 0:
            raise DomainError("L'espacement entre sites doit être strictement positif")


@dataclass(frozen=True)
class SelectivityReport:
    spacing_hz: float
    ratio: float
    threshold: float
    selective: bool


@dataclass(frozen=True)
class AddressabilityReport:
    site_splitting_hz: float
    energy_gradient_hz_per_cm: float
    site_spacing_m: float
    raman_rabi_rad_s: float
    trap_frequency_rad_s: float
    band_factor: float
    site_resolvable: bool
    band_safe: bool
    min_readout_time_s: float
    band_period_s: float
    addressable: bool


# --- Système ouvert ---

@dataclass(frozen=True)
class LossSystem:
    omega: float
    delta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega >= 0:
            raise DomainError("Ω doit être positif ou nul")
        if not self.gamma >= 0:
            raise DomainError("Γ doit être positif ou nul")


@dataclass(frozen=True)
class JumpOperator:
    operator: np.ndarray
    rate: float
    label: str = ""


@dataclass(frozen=True)
class LindbladModel:
    hamiltonian: np.ndarray
    jump_operators: Tuple[JumpOperator, ...] = ()
    labels: Tuple[str, ...] = ()

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]

    @property
    def trace(self) -> float:
        return float(np.trace(self.entries).real)

    def populations(self) -> np.ndarray:
        return np.real(np.diag(self.entries)).copy()

    @classmethod
    def from_ket(cls, ket) -> "DensityMatrix":
        ket = np.asarray(ket, dtype=complex)
        return cls(np.outer(ket, ket.conj()))

    @classmethod
    def basis(cls, dim: int, index: int) -> "DensityMatrix":
        ket = np.zeros(dim, dtype=complex)
        ket[index] = 1.0
        return cls.from_ket(ket)


@dataclass(frozen=True)
class IntegratorParams:
    dt: float
    t_final: float
    stride: int = 1

    def __post_init__(self):
        if not (0 < self.dt <= self.t_final):
            raise DomainError("Il faut 0 < dt <= t_final")
        if self.stride < 1:
            raise DomainError("Le pas d'échantillonnage doit être >= 1")


@dataclass(frozen=True)
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    labels: Tuple[str, ...] = ()

    @property
    def final(self) -> DensityMatrix:
        return DensityMatrix(self.states[-1])


@dataclass(frozen=True)
class EffectiveLossRate:
    rate: float
    perturbative: bool


# --- Porte à blocage ---

ATOM_BASIS = ("0", "1", "0x", "1x", "lost")
LOGICAL_INPUTS = ((0, 0), (0, 1), (1, 0), (1, 1))


class BlockadeVariant(Enum):
    PERFECT = "perfect"
    INTERACTION = "interaction"
    LOSSY = "lossy"
    COMBINED = "combined"


class Transition(Enum):
    ZERO = "0-0x"
    ONE = "1-1x"

    @property
    def indices(self) -> Tuple[int, int]:
        return (0, 2) if self is Transition.ZERO else (1, 3)


@dataclass(frozen=True)
class AtomState:
    amplitudes: np.ndarray
    loss_probability: float = 0.0

    @classmethod
    def logical(cls, bit: int) -> "AtomState":
        amplitudes = np.zeros(len(ATOM_BASIS), dtype=complex)
        amplitudes[bit] = 1.0
        return cls(amplitudes)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)


@dataclass(frozen=True)
class PairState:
    amplitudes: np.ndarray
    colocated: bool = False
    loss_probability: float = 0.0

    @classmethod
    def logical(cls, q1: int, q2: int, colocated: bool = False) -> "PairState":
        return cls(np.kron(AtomState.logical(q1).amplitudes, AtomState.logical(q2).amplitudes), colocated)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amplitudes, self.amplitudes).real)

    def amplitude(self, label_1: str, label_2: str) -> complex:
        index = ATOM_BASIS.index(label_1) * len(ATOM_BASIS) + ATOM_BASIS.index(label_2)
        return complex(self.amplitudes[index])


@dataclass(frozen=True)
class BlockadeModel:
    variant: BlockadeVariant
    omega: float
    delta: float = 0.0
    gamma: float = 0.0

    def __post_init__(self):
        if not self.omega > 0:
            raise DomainError("La fréquence de Rabi des impulsions doit être strictement positive")
        if not self.gamma >= 0:
            raise DomainError("Γ doit être positif ou nul")

    @classmethod
    def perfect(cls, omega: float) -> "BlockadeModel":
        return cls(BlockadeVariant.PERFECT, omega)

    @classmethod
    def interaction(cls, omega: float, delta: float) -> "BlockadeModel":
        return cls(BlockadeVariant.INTERACTION, omega, delta=delta)

    @classmethod
    def lossy(cls, omega: float, gamma: float) -> "BlockadeModel":
        return cls(BlockadeVariant.LOSSY, omega, gamma=gamma)

    @classmethod
    def combined(cls, omega: float, delta: float, gamma: float) -> "BlockadeModel":
        return cls(BlockadeVariant.COMBINED, omega, delta=delta, gamma=gamma)


@dataclass(frozen=True)
class Pulse:
    transition: Transition
    area: float
    phase: float = 0.0

    def __post_init__(self):
        if self.area < 0:
            raise DomainError("L'aire d'impulsion doit être positive")


@dataclass(frozen=True)
class ProtocolTrace:
    initial: Tuple[int, int]
    after_step_1: PairState
    after_step_2: PairState
    after_step_3: PairState

    @property
    def final(self) -> PairState:
        return self.after_step_3


@dataclass(frozen=True)
class GateReport:
    truth_table: Dict[str, ProtocolTrace]
    process_map: np.ndarray
    superposition_output: np.ndarray
    process_fidelity: float
    max_loss_probability: float
    residual_phase: float
    model: BlockadeModel


@dataclass(frozen=True)
class ScanPoint:
    ratio: float
    loss_probability: float
    process_fidelity: float
    gamma_eff_prediction: float


@dataclass(frozen=True)
class CollisionalPhase:
    phase: float
    pi_hold_time: float
    within_single_band: Optional[bool] = None


@dataclass(frozen=True)
class BudgetInput:
    omega_trap: float
    noise_freqs_hz: Tuple[float, ...] = ()
    noise_psd: Tuple[float, ...] = ()
    epsilon: float = 0.0
    depth_fluctuation: float = 0.0
    detuning_noise: float = 0.0
    epsilon_3: float = 0.0
    gamma_3p0: float = 0.0
    lattice_depth: Optional[float] = None
    rabi_frequency: Optional[float] = None
    gate_time: Optional[float] = None

    def __post_init__(self):
        scalars = (self.epsilon, self.depth_fluctuation, self.detuning_noise, self.epsilon_3, self.gamma_3p0)
        if any(value < 0 for value in scalars) or any(value < 0 for value in self.noise_psd):
            raise DomainError("Les entrées du budget de décohérence doivent être positives ou nulles")
        if len(self.noise_freqs_hz) != len(self.noise_psd):
            raise DomainError("La table S_e doit avoir autant de fréquences que de valeurs")


@dataclass
class BudgetReport:
    heating_rate: Optional[float]
    delta_omega_exact: Optional[float]
    delta_omega_linear: Optional[float]
    delta_omega_relative_difference: Optional[float]
    depth_noise_estimate: Optional[float]
    pair_loss_suppression: float
    pair_loss_rate: float
    dephasing_time: Optional[float]
    collisional_gate_error: Optional[float] = None
    notes: List[str] = field(default_factory=list)
