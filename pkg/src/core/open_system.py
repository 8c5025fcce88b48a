#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Dynamique ouverte (équation de Lindblad)
Intégrateur RK4 à pas fixe pour matrices densité de petite dimension,
système à deux niveaux avec pertes et taux de perte effectif.
"""
import logging
import math
from pathlib import Path
from typing import Optional

import numpy as np
from scipy.linalg import expm

from core.data_model import (DensityMatrix, EffectiveLossRate, IntegratorParams, JumpOperator, LindbladModel,
                             LossSystem, Trajectory)
from core.exceptions import DomainError, IntegrationError
from utils.file_utils import FileUtils

HERMITIAN_TOLERANCE = 1e-12
TRACE_DRIFT_LIMIT = 1e-6
POSITIVITY_TOLERANCE = 1e-10
STEP_WARNING_THRESHOLD = 0.05

SINK_LABELS = ("g", "e", "lost")
RECYCLING_LABELS = ("g", "e")


def liouvillian(model: LindbladModel) -> np.ndarray:
    """
    Superopérateur L tel que vec(dρ/dt) = L·vec(ρ)

    Vectorisation ligne par ligne : vec(AρB) = (A ⊗ Bᵀ)·vec(ρ).
    """
    dim = model.dim
    identity = np.eye(dim)
    hamiltonian = np.asarray(model.hamiltonian, dtype=complex)
    superop = -1j * (np.kron(hamiltonian, identity) - np.kron(identity, hamiltonian.T))

    for jump in model.jump_operators:
        op = np.asarray(jump.operator, dtype=complex)
        number = op.conj().T @ op
        superop += jump.rate * (np.kron(op, op.conj())
                                - 0.5 * np.kron(number, identity)
                                - 0.5 * np.kron(identity, number.T))
    return superop


class OpenSystemSolver:
    """Intégrateur de l'équation maîtresse et modèle de blocage à pertes"""

    def __init__(self):
        self.logger = logging.getLogger(__name__)
        self.debug_logger = logging.getLogger('debug_trace')

    # --- Modèles ---

    def build_loss_model(self, system: LossSystem, sink: bool = True) -> LindbladModel:
        """
        Système à deux niveaux H = (Ω/2)σx - (Δ/2)σz avec perte Γ depuis |e⟩

        Args:
            system: Ω, Δ, Γ en rad/s
            sink: True pour ajouter un état |lost⟩ absorbant (trace perdue =
                probabilité de perte), False pour la forme à recyclage σ⁻ vers |g⟩

        Returns:
            Modèle de Lindblad de dimension 3 (puits) ou 2 (recyclage)
        """
        labels = SINK_LABELS if sink else RECYCLING_LABELS
        dim = len(labels)
        g, e = 0, 1

        hamiltonian = np.zeros((dim, dim), dtype=complex)
        hamiltonian[g, e] = hamiltonian[e, g] = system.omega / 2.0
        hamiltonian[g, g] = system.delta / 2.0
        hamiltonian[e, e] = -system.delta / 2.0

        jumps = ()
        if system.gamma > 0:
            operator = np.zeros((dim, dim), dtype=complex)
            target = labels.index("lost") if sink else g
            operator[target, e] = 1.0
            jumps = (JumpOperator(operator, system.gamma, label=f"e->{labels[target]}"),)

        return LindbladModel(hamiltonian=hamiltonian, jump_operators=jumps, labels=labels)

    def liouvillian(self, model: LindbladModel) -> np.ndarray:
        self._check_model(model)
        return liouvillian(model)

    def default_dt(self, system: LossSystem, t_final: float) -> float:
        """Pas par défaut min(1e-3·2π/Ω, 1e-2/Γ, 1e-2/|Δ|), borné par t_final"""
        candidates = [t_final]
        if system.omega > 0:
            candidates.append(1e-3 * 2.0 * math.pi / system.omega)
        if system.gamma > 0:
            candidates.append(1e-2 / system.gamma)
        if system.delta != 0:
            candidates.append(1e-2 / abs(system.delta))
        return min(candidates)

    # --- Validation ---

    def _check_model(self, model: LindbladModel):
        hamiltonian = np.asarray(model.hamiltonian)
        if hamiltonian.ndim != 2 or hamiltonian.shape[0] != hamiltonian.shape[1]:
            raise DomainError(f"Hamiltonien non carré: {hamiltonian.shape}")
        if not np.all(np.isfinite(hamiltonian)):
            raise DomainError("Hamiltonien non fini")
        scale = max(float(np.max(np.abs(hamiltonian))), 1.0)
        if np.max(np.abs(hamiltonian - hamiltonian.conj().T)) > HERMITIAN_TOLERANCE * scale:
            raise DomainError("Le hamiltonien n'est pas hermitien")
        for jump in model.jump_operators:
            if np.shape(jump.operator) != hamiltonian.shape:
                raise DomainError(f"Opérateur de saut '{jump.label}' de dimension incompatible")
            if not jump.rate >= 0:
                raise DomainError(f"Taux négatif pour l'opérateur de saut '{jump.label}'")

    def _check_state(self, model: LindbladModel, rho0: DensityMatrix) -> np.ndarray:
        entries = np.asarray(rho0.entries, dtype=complex)
        if entries.shape != (model.dim, model.dim):
            raise DomainError(f"Dimension de ρ0 {entries.shape} incompatible avec le modèle ({model.dim})")
        if not np.all(np.isfinite(entries)):
            raise DomainError("ρ0 contient des valeurs non finies")
        if np.max(np.abs(entries - entries.conj().T)) > HERMITIAN_TOLERANCE:
            raise DomainError("ρ0 n'est pas hermitienne")
        return entries

    # --- Intégration ---

    def step_matrix(self, superop: np.ndarray, dt: float) -> np.ndarray:
        """Propagateur d'un pas RK4 pour l'équation linéaire dρ/dt = Lρ"""
        scaled = dt * superop
        propagator = np.eye(superop.shape[0], dtype=complex)
        term = propagator
        for order in range(1, 5):
            term = term @ scaled / order
            propagator = propagator + term
        return propagator

    def evolve(self, model: LindbladModel, rho0: DensityMatrix, params: IntegratorParams) -> Trajectory:
        """
        Intègre l'équation de Lindblad par Runge-Kutta d'ordre 4 à pas fixe

        Le nombre de pas est ceil(t_final/dt) et le pas effectif t_final/n,
        de sorte que le dernier échantillon tombe exactement sur t_final.

        Args:
            model: Hamiltonien et opérateurs de saut
            rho0: État initial
            params: Pas, durée et pas d'échantillonnage

        Returns:
            Trajectoire échantillonnée (l'état final est toujours inclus)
        """
        self._check_model(model)
        entries = self._check_state(model, rho0)
        dim = model.dim

        superop = liouvillian(model)
        steps = max(1, math.ceil(params.t_final / params.dt - 1e-9))
        dt = params.t_final / steps

        frequency_scale = float(np.max(np.abs(np.linalg.eigvals(superop)))) if dim else 0.0
        if dt * frequency_scale > STEP_WARNING_THRESHOLD:
            self.logger.warning(f"Pas d'intégration grossier : dt·échelle = {dt * frequency_scale:.3g} "
                                f"> {STEP_WARNING_THRESHOLD}")

        propagator = self.step_matrix(superop, dt)
        stride_propagator = np.linalg.matrix_power(propagator, params.stride)

        self.debug_logger.info(f"--- Intégration Lindblad : dim={dim}, {steps} pas de {dt:.3e} s ---")

        vector = entries.reshape(-1).copy()
        initial_trace = np.trace(entries).real
        times = [0.0]
        states = [entries.copy()]
        done = 0
        while done < steps:
            block = min(params.stride, steps - done)
            operator = stride_propagator if block == params.stride else np.linalg.matrix_power(propagator, block)
            vector = operator @ vector
            done += block

            state = vector.reshape(dim, dim)
            drift = abs(np.trace(state).real - initial_trace)
            if not drift <= TRACE_DRIFT_LIMIT or not np.all(np.isfinite(vector)):
                raise IntegrationError(f"Dérive de la trace {drift:.3e} à t={done * dt:.3e} s : pas trop grand")
            times.append(done * dt)
            states.append(state.copy())

        final = states[-1]
        smallest = float(np.min(np.linalg.eigvalsh(0.5 * (final + final.conj().T))))
        if smallest < -POSITIVITY_TOLERANCE:
            self.logger.warning(f"Valeur propre négative {smallest:.3e} dans l'état final (pas fixe)")

        return Trajectory(times=np.asarray(times), states=np.asarray(states), labels=model.labels)

    # --- Survie et taux effectif ---

    def survival_probability(self, system: LossSystem, t: float, params: Optional[IntegratorParams] = None) -> float:
        """
        Probabilité qu'aucune perte ne se soit produite au temps t, depuis |g⟩

        Calculée par le modèle à puits (1 - P_lost) ; la propagation sans saut
        sert de contrôle croisé dans le canal de trace.
        """
        if not t >= 0:
            raise DomainError("Le temps doit être positif ou nul")
        if t == 0:
            return 1.0

        dt = params.dt if params is not None else self.default_dt(system, t)
        # seul l'état final est utile
        stride = params.stride if params is not None else max(1, math.ceil(t / dt))
        model = self.build_loss_model(system, sink=True)
        trajectory = self.evolve(model, DensityMatrix.basis(model.dim, 0),
                                 IntegratorParams(dt=min(dt, t), t_final=t, stride=max(stride, 1)))

        survival = 1.0 - float(trajectory.final.entries[2, 2].real)
        self.debug_logger.info(f"    Survie {survival:.12f}, contrôle sans saut "
                               f"{self.no_jump_survival(system, t):.12f}")
        return survival

    def no_jump_survival(self, system: LossSystem, t: float) -> float:
        """Norme au carré sous H_eff = H - iΓ/2·|e⟩⟨e| depuis |g⟩"""
        hamiltonian = self.build_loss_model(system, sink=False).hamiltonian.copy()
        hamiltonian[1, 1] -= 0.5j * system.gamma
        amplitudes = expm(-1j * hamiltonian * t) @ np.array([1.0, 0.0], dtype=complex)
        return float(np.vdot(amplitudes, amplitudes).real)

    def gamma_eff(self, system: LossSystem) -> EffectiveLossRate:
        """
        Taux de perte effectif Ω²Γ/(4(Δ² + Γ²/4))

        Limites : Ω²/Γ pour Δ = 0 (Γ ≫ Δ), Ω²Γ/(4Δ²) pour Γ ≪ Δ.
        Le drapeau perturbative est faux dès que Ω > max(|Δ|, Γ)/5.
        """
        denominator = 4.0 * (system.delta ** 2 + system.gamma ** 2 / 4.0)
        rate = 0.0 if system.omega == 0 or system.gamma == 0 else system.omega ** 2 * system.gamma / denominator
        perturbative = not system.omega > max(abs(system.delta), system.gamma) / 5.0
        if not perturbative:
            self.debug_logger.info("    Γ_eff hors du régime perturbatif (Ω > max(Δ, Γ)/5)")
        return EffectiveLossRate(rate=rate, perturbative=perturbative)

    # --- Export ---

    def export_trajectory_csv(self, trajectory: Trajectory, path: Path, columns: str = "populations") -> Path:
        """
        Exporte une trajectoire en CSV

        Args:
            trajectory: Résultat de evolve
            path: Fichier de sortie
            columns: "populations" (t_s, pop_<état>...) ou "entries"
                (t_s, re_i_j, im_i_j en ordre ligne par ligne)
        """
        dim = trajectory.states.shape[1]
        labels = trajectory.labels or tuple(str(i) for i in range(dim))

        if columns == "populations":
            header = ["t_s"] + [f"pop_{label}" for label in labels]
            rows = [[t] + list(np.real(np.diag(state))) for t, state in zip(trajectory.times, trajectory.states)]
        elif columns == "entries":
            header = ["t_s"]
            for i in range(dim):
                for j in range(dim):
                    header += [f"re_{i}_{j}", f"im_{i}_{j}"]
            rows = []
            for t, state in zip(trajectory.times, trajectory.states):
                flat = state.reshape(-1)
                rows.append([t] + [part for value in flat for part in (value.real, value.imag)])
        else:
            raise DomainError(f"Jeu de colonnes inconnu: {columns}")

        return FileUtils.write_csv(path, header, rows)
