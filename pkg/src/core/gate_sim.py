#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Porte de phase contrôlée par blocage
Transport dépendant du spin, protocole à trois impulsions sous blocage
parfait / par interaction / par pertes, fidélité de processus et budget
de décohérence.
"""
import logging
import math
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import expm

from core.data_model import (ATOM_BASIS, LOGICAL_INPUTS, AtomState, BlockadeModel, BlockadeVariant, BudgetInput,
                             BudgetReport, CollisionalPhase, DensityMatrix, GateReport, IntegratorParams,
                             JumpOperator, LindbladModel, LossSystem, PairState, ProtocolTrace, Pulse, ScanPoint,
                             Species, Transition)
from core.exceptions import DomainError
from core.open_system import OpenSystemSolver
from utils.parallel import parallel_map
from utils.units import HBAR, TWO_PI, rad_to_joule

ATOM_DIM = len(ATOM_BASIS)
IDEAL_GATE = np.diag([1.0, -1.0, 1.0, 1.0]).astype(complex)

STEP_1 = Pulse(Transition.ZERO, math.pi)
STEP_2 = Pulse(Transition.ONE, TWO_PI)
STEP_3 = Pulse(Transition.ZERO, math.pi)


def pair_index(label_1: str, label_2: str) -> int:
    return ATOM_BASIS.index(label_1) * ATOM_DIM + ATOM_BASIS.index(label_2)


# Sous-espace bloqué de la paire colocalisée : |0x,1⟩ et |0x,1x⟩
BLOCKED_SUBSPACE = (pair_index("0x", "1"), pair_index("0x", "1x"))
LOGICAL_INDICES = tuple(pair_index(str(q1), str(q2)) for q1, q2 in LOGICAL_INPUTS)


class GateSimulator:
    """Simulation de la porte à blocage pour une paire de qubits voisins"""

    def __init__(self, solver: Optional[OpenSystemSolver] = None):
        self.logger = logging.getLogger(__name__)
        self.debug_logger = logging.getLogger('debug_trace')
        self.solver = solver or OpenSystemSolver()

    # --- Transport ---

    def transport_positions(self, positions: Sequence[int], spins: Sequence[int],
                            direction: int = 1) -> Tuple[int, ...]:
        """
        Déplace le réseau du spin 1 d'un site vers la gauche (direction=1) ou le ramène (direction=-1)

        Args:
            positions: Sites occupés
            spins: Qubit de chaque atome
            direction: 1 pour le transport aller, -1 pour le retour

        Returns:
            Nouvelles positions, le réseau du spin 0 restant immobile
        """
        if direction not in (1, -1):
            raise DomainError(f"Direction de transport invalide: {direction}")
        if len(positions) != len(spins):
            raise DomainError("Autant de spins que de positions sont requis")
        if any(spin not in (0, 1) for spin in spins):
            raise DomainError("Les spins doivent valoir 0 ou 1")
        return tuple(int(position) - direction * int(spin) for position, spin in zip(positions, spins))

    def transport_colocate(self, q1: int, q2: int) -> bool:
        """Vrai si la paire voisine (q1 à gauche, q2 à droite) partage un site après transport"""
        shifted = self.transport_positions((0, 1), (q1, q2))
        return shifted[0] == shifted[1]

    # --- Impulsions ---

    def pulse_unitary(self, pulse: Pulse) -> np.ndarray:
        """exp(-i·(aire/2)·σ) sur le sous-espace de la transition, identité ailleurs"""
        q, x = pulse.transition.indices
        unitary = np.eye(ATOM_DIM, dtype=complex)
        c, s = math.cos(pulse.area / 2.0), math.sin(pulse.area / 2.0)
        unitary[q, q] = unitary[x, x] = c
        unitary[x, q] = -1j * s * np.exp(1j * pulse.phase)
        unitary[q, x] = -1j * s * np.exp(-1j * pulse.phase)
        return unitary

    def _blocked_evolution(self, model: BlockadeModel, area: float, amplitudes: np.ndarray) -> Tuple[np.ndarray, float]:
        """
        Impulsion bloquée sur le sous-espace (fondamental, doublement excité)

        L'état doublement excité est déplacé de -Δ et perdu au taux Γ.
        Les amplitudes sont lues sur les cohérences avec un état de référence
        non couplé ; la population perdue sur l'état puits.

        Returns:
            (amplitudes finales, probabilité perdue selon le puits)
        """
        amplitudes = np.asarray(amplitudes, dtype=complex)
        if model.variant is BlockadeVariant.PERFECT or area == 0:
            return amplitudes.copy(), 0.0

        duration = area / model.omega
        hamiltonian = np.array([[0.0, model.omega / 2.0], [model.omega / 2.0, -model.delta]], dtype=complex)
        if model.gamma == 0:
            return expm(-1j * hamiltonian * duration) @ amplitudes, 0.0

        # base : fondamental, excité, perdu, référence
        full = np.zeros((4, 4), dtype=complex)
        full[:2, :2] = hamiltonian
        jump = np.zeros((4, 4), dtype=complex)
        jump[2, 1] = 1.0
        lindblad = LindbladModel(full, (JumpOperator(jump, model.gamma, "blockade-loss"),),
                                 ("ground", "doubly-excited", "lost", "reference"))

        norm_sq = float(np.vdot(amplitudes, amplitudes).real) + 1.0
        ket = np.concatenate([amplitudes, [0.0, 1.0]]) / math.sqrt(norm_sq)
        dt = self.solver.default_dt(LossSystem(model.omega, model.delta, model.gamma), duration)
        params = IntegratorParams(dt=dt, t_final=duration, stride=max(1, math.ceil(duration / dt)))
        final = self.solver.evolve(lindblad, DensityMatrix.from_ket(ket), params).final.entries
        return final[:2, 3] * norm_sq, float(final[2, 2].real) * norm_sq

    def apply_pulse(self, state: AtomState, pulse: Pulse, blocked: bool = False,
                    model: Optional[BlockadeModel] = None) -> AtomState:
        """
        Applique une impulsion à un atome isolé

        Si blocked, le partenaire colocalisé est supposé dans |0x⟩ et la
        transition suit le modèle de blocage ; le déficit de norme s'ajoute
        à la probabilité de perte.
        """
        if not blocked:
            return AtomState(self.pulse_unitary(pulse) @ state.amplitudes, state.loss_probability)
        if model is None:
            raise DomainError("Un modèle de blocage est requis pour une impulsion bloquée")

        indices = list(pulse.transition.indices)
        amplitudes = state.amplitudes.astype(complex).copy()
        before = float(np.vdot(amplitudes[indices], amplitudes[indices]).real)
        amplitudes[indices], _ = self._blocked_evolution(model, pulse.area, amplitudes[indices])
        after = float(np.vdot(amplitudes[indices], amplitudes[indices]).real)
        return AtomState(amplitudes, state.loss_probability + max(before - after, 0.0))

    def _pair_pulse(self, state: PairState, pulse: Pulse, model: BlockadeModel) -> PairState:
        unitary = self.pulse_unitary(pulse)
        amplitudes = np.kron(unitary, unitary) @ state.amplitudes
        loss = state.loss_probability

        if state.colocated and pulse.transition is Transition.ONE:
            indices = list(BLOCKED_SUBSPACE)
            blocked_in = state.amplitudes[indices]
            before = float(np.vdot(blocked_in, blocked_in).real)
            if before > 0:
                blocked_out, sink = self._blocked_evolution(model, pulse.area, blocked_in)
                amplitudes[indices] = blocked_out
                deficit = max(before - float(np.vdot(blocked_out, blocked_out).real), 0.0)
                self.debug_logger.info(f"    Pas bloqué : perte {deficit:.9e} (puits {sink:.9e})")
                loss += deficit

        return PairState(amplitudes, state.colocated, loss)

    # --- Protocole ---

    def blockade_protocol(self, initial: Tuple[int, int], model: BlockadeModel) -> ProtocolTrace:
        """
        Protocole en trois étapes pour une entrée logique |q1 q2⟩

        1. π sur 0↔0x pour les deux atomes
        2. 2π sur 1↔1x, bloquée si la paire est colocalisée
        3. π sur 0x↔0
        """
        q1, q2 = initial
        if q1 not in (0, 1) or q2 not in (0, 1):
            raise DomainError(f"Entrée logique invalide: {initial}")

        state = PairState.logical(q1, q2, colocated=self.transport_colocate(q1, q2))
        after_1 = self._pair_pulse(state, STEP_1, model)
        after_2 = self._pair_pulse(after_1, STEP_2, model)
        after_3 = self._pair_pulse(after_2, STEP_3, model)
        return ProtocolTrace(initial=(q1, q2), after_step_1=after_1, after_step_2=after_2, after_step_3=after_3)

    def process_fidelity(self, process_map: np.ndarray) -> float:
        """|tr(U_idéal† M)|²/16 pour la porte de phase contrôlée"""
        return float(abs(np.trace(IDEAL_GATE.conj().T @ process_map)) ** 2 / 16.0)

    def gate_truth_table(self, model: BlockadeModel) -> GateReport:
        """
        Table de vérité, carte de processus et fidélité pour un modèle de blocage

        L'entrée superposée (|0⟩+|1⟩)⊗(|0⟩+|1⟩)/2 est la somme linéaire des
        branches logiques, chacune transportée et évoluée séparément.
        """
        traces: Dict[str, ProtocolTrace] = {}
        process_map = np.zeros((4, 4), dtype=complex)
        superposition = np.zeros(ATOM_DIM * ATOM_DIM, dtype=complex)

        for column, (q1, q2) in enumerate(LOGICAL_INPUTS):
            trace = self.blockade_protocol((q1, q2), model)
            traces[f"{q1}{q2}"] = trace
            process_map[:, column] = trace.final.amplitudes[list(LOGICAL_INDICES)]
            superposition += 0.5 * trace.final.amplitudes

        fidelity = min(max(self.process_fidelity(process_map), 0.0), 1.0)
        max_loss = max(trace.final.loss_probability for trace in traces.values())
        residual_phase = float(np.angle(-process_map[1, 1]))

        self.logger.info(f"Porte ({model.variant.value}) : F = {fidelity:.9f}, perte max = {max_loss:.3e}")
        return GateReport(truth_table=traces, process_map=process_map, superposition_output=superposition,
                          process_fidelity=fidelity, max_loss_probability=max_loss,
                          residual_phase=residual_phase, model=model)

    def fidelity_scan(self, omega: float, ratios: Sequence[float], axis: str = "gamma", delta_ratio: float = 0.0,
                      gamma_ratio: float = 0.0, threads: int = 1) -> List[ScanPoint]:
        """
        Perte et fidélité le long d'une grille Γ/Ω (axis="gamma") ou Δ/Ω (axis="delta")

        Args:
            omega: Fréquence de Rabi des impulsions (rad/s)
            ratios: Valeurs du rapport balayé
            axis: Paramètre balayé
            delta_ratio: Δ/Ω fixe lorsque Γ est balayé
            gamma_ratio: Γ/Ω fixe lorsque Δ est balayé
            threads: Nombre de fils

        Returns:
            Un ScanPoint par rapport, la prédiction étant 1 - exp(-Γ_eff·2π/Ω)
        """
        ratios = [float(ratio) for ratio in ratios]
        if not ratios:
            raise DomainError("La grille de rapports doit être non vide")
        if axis not in ("gamma", "delta"):
            raise DomainError(f"Axe de balayage inconnu: {axis}")

        def scan_point(ratio: float) -> ScanPoint:
            delta, gamma = (delta_ratio, ratio) if axis == "gamma" else (ratio, gamma_ratio)
            model = BlockadeModel.combined(omega, delta * omega, gamma * omega)
            report = self.gate_truth_table(model)
            rate = self.solver.gamma_eff(LossSystem(omega, model.delta, model.gamma)).rate
            prediction = -math.expm1(-rate * TWO_PI / omega)
            return ScanPoint(ratio=ratio, loss_probability=report.max_loss_probability,
                             process_fidelity=report.process_fidelity, gamma_eff_prediction=prediction)

        self.debug_logger.info(f"--- Balayage de fidélité ({axis}) : {len(ratios)} points ---")
        return parallel_map(scan_point, ratios, threads)

    # --- Variante collisionnelle et échelles de temps ---

    def collisional_phase_gate(self, u_onsite: float, hold_time: float,
                               omega_trap: Optional[float] = None) -> CollisionalPhase:
        if hold_time < 0:
            raise DomainError("La durée de maintien doit être positive")
        pi_hold = math.inf if u_onsite == 0 else math.pi / abs(u_onsite)
        within = None
        if omega_trap is not None:
            within = abs(u_onsite) <= omega_trap
            if not within:
                self.logger.warning("Interaction sur site supérieure à la fréquence de piégeage : "
                                    "hors du régime à une bande")
        return CollisionalPhase(phase=u_onsite * hold_time, pi_hold_time=pi_hold, within_single_band=within)

    def loss_to_gate_time_ratio(self, omega: float, delta: float, gamma: float) -> float:
        """τ_perte/τ_porte = Ω/(2π·Γ_eff), soit Γ/(2πΩ) pour Δ = 0"""
        rate = self.solver.gamma_eff(LossSystem(omega, delta, gamma)).rate
        return math.inf if rate == 0 else omega / (TWO_PI * rate)

    # --- Budget de décohérence ---

    def decoherence_budget(self, budget: BudgetInput, species: Species) -> BudgetReport:
        """
        Taux de chauffage, différence de fréquence de piégeage, bruit de
        profondeur et suppression des pertes à deux corps

        Le taux de chauffage vaut π²ν²·S_e(2ν)/2 avec ν = ω/2π : la
        fréquence de piégeage y entre en Hz, comme l'axe de la table S_e.
        Le Δ_ω exact vaut 2√(ΔV·E_R)·ε/(1+ε)/ħ, la forme linéarisée 2ε√(ΔV·E_R)/ħ.

        Args:
            budget: Entrées du budget (pulsations en rad/s, S_e en 1/Hz)
            species: Constantes de l'espèce (masse, longueur d'onde)

        Returns:
            Rapport ; les grandeurs sans entrée suffisante valent None
        """
        if not budget.omega_trap > 0:
            raise DomainError("La fréquence de piégeage doit être strictement positive")
        notes: List[str] = []

        heating = None
        trap_hz = budget.omega_trap / TWO_PI
        if budget.noise_freqs_hz:
            freqs = np.asarray(budget.noise_freqs_hz, dtype=float)
            order = np.argsort(freqs)
            freqs, psd = freqs[order], np.asarray(budget.noise_psd, dtype=float)[order]
            target = 2.0 * trap_hz
            if not freqs[0] <= target <= freqs[-1]:
                raise DomainError(f"La table S_e [{freqs[0]:.6g}, {freqs[-1]:.6g}] Hz ne couvre pas "
                                  f"2ν = {target:.6g} Hz")
            heating = math.pi ** 2 * trap_hz ** 2 * float(np.interp(target, freqs, psd)) / 2.0
        else:
            notes.append("Pas de table S_e : taux de chauffage non calculé")

        exact = linear = relative = dephasing = None
        if budget.lattice_depth is not None:
            depth_joule = budget.depth_fluctuation * rad_to_joule(budget.lattice_depth)
            recoil = (HBAR * species.wavenumber) ** 2 / (2.0 * species.mass)
            root = math.sqrt(depth_joule * recoil)
            exact = 2.0 * root * (budget.epsilon / (1.0 + budget.epsilon)) / HBAR
            linear = 2.0 * budget.epsilon * root / HBAR
            relative = 0.0 if exact == 0 else abs(linear - exact) / abs(exact)
            if exact > 0:
                dephasing = 1.0 / exact
            else:
                notes.append("Δ_ω nul : pas de déphasage par différence de fréquence de piégeage")
        else:
            notes.append("Profondeur du réseau absente : Δ_ω non calculé")

        depth_noise = None
        if budget.rabi_frequency:
            depth_noise = budget.detuning_noise ** 2 / budget.rabi_frequency ** 2
            if budget.detuning_noise > budget.rabi_frequency / 10.0:
                notes.append("Δδ n'est pas petit devant Ω : estimation ΔV ≈ Δδ²/Ω² hors validité")

        suppression = budget.epsilon_3 ** 2
        pair_loss = budget.gamma_3p0 * suppression
        gate_error = None
        if budget.gate_time is not None:
            gate_error = -math.expm1(-pair_loss * budget.gate_time)

        self.logger.info("Budget de décohérence calculé")
        return BudgetReport(heating_rate=heating, delta_omega_exact=exact, delta_omega_linear=linear,
                            delta_omega_relative_difference=relative, depth_noise_estimate=depth_noise,
                            pair_loss_suppression=suppression, pair_loss_rate=pair_loss,
                            dephasing_time=dephasing, collisional_gate_error=gate_error, notes=notes)
