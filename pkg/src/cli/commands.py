#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Commandes
Traduction d'une configuration de run en appels aux moteurs et écriture
des artefacts CSV / JSON.
"""

import logging
import math
from dataclasses import asdict
from pathlib import Path
from typing import Any, Callable, Dict, List, Sequence

import numpy as np

from core.data_model import (ATOM_BASIS, BlockadeModel, BudgetInput, DressingField, GateReport, GradientConfig,
                             LatticeConfig, PairState, Species, StarkConfig, ZeemanConfig)
from core.exceptions import ConfigError
from core.gate_sim import GateSimulator
from core.lattice_core import AdmixtureWeighting, DressedLattice
from core.spin_register import SpinRegister
from utils.config_manager import ConfigManager
from utils.file_utils import FileUtils
from utils.units import hz_to_rad, rad_to_hz

logger = logging.getLogger(__name__)

POTENTIAL_COLUMNS = ("phi_rad", "x_m", "spin", "v_lower_hz", "v_upper_hz", "admixture_e")
ADMIXTURE_COLUMNS = ("phi_rad", "detuning_hz", "spin", "admixture_e")
BLOCKADE_COLUMNS = ("ratio", "loss_probability", "process_fidelity", "gamma_eff_prediction")

AMPLITUDE_CUTOFF = 1e-12


def build_lattice_config(params: Dict[str, Any], species: Species) -> LatticeConfig:
    """Bloc de paramètres (Hz) vers LatticeConfig (rad/s), même δ et Ω pour les deux qubits"""
    wavenumber = species.wavenumber
    omega = hz_to_rad(params["rabi_hz"])
    detuning = hz_to_rad(params["detuning_hz"])
    return LatticeConfig(
        species=species,
        field_0=DressingField(omega, detuning, wavenumber, 0.0, spin_label=0),
        field_1=DressingField(omega, detuning, wavenumber, 0.0, spin_label=1),
        stark=StarkConfig(hz_to_rad(params["stark_g_hz"]), hz_to_rad(params["stark_e_hz"])),
        include_offresonant=params["include_offresonant"],
    )


def write_table(config: ConfigManager, columns: Sequence[str], rows: List[Sequence[Any]]) -> Path:
    if config.get("format") == "json":
        records = [dict(zip(columns, (_finite(value) for value in row))) for row in rows]
        return FileUtils.write_json(config.output_path, {"columns": list(columns), "rows": records})
    return FileUtils.write_csv(config.output_path, columns, rows)


def _finite(value: Any) -> Any:
    """Les non-finis n'existent pas en JSON : None à la place"""
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value) if math.isfinite(value) else None
    return value


def _clean(record: Dict[str, Any]) -> Dict[str, Any]:
    return {key: _finite(value) for key, value in record.items()}


# --- Commandes ---

def cmd_potential_scan(config: ConfigManager) -> Path:
    params = config.params
    lattice = build_lattice_config(params, config.load_species())
    engine = DressedLattice()
    grid = engine.lattice_grid(lattice, params["points_per_period"], params["periods"])

    rows = [
        (row.phi, row.sample.x, row.spin, rad_to_hz(row.sample.v_lower), rad_to_hz(row.sample.v_upper),
         row.sample.admixture_e)
        for row in engine.potential_scan(lattice, params["phases_rad"], grid, threads=config.get("threads"))
    ]
    logger.info(f"Balayage des potentiels : {len(rows)} lignes")
    return write_table(config, POTENTIAL_COLUMNS, rows)


def cmd_admixture_scan(config: ConfigManager) -> Path:
    params = config.params
    lattice = build_lattice_config(params, config.load_species())
    try:
        weighting = AdmixtureWeighting(params["weighting"])
    except ValueError as e:
        raise ConfigError(f"Pondération inconnue: {params['weighting']} (uniform ou density)") from e
    if params["spin"] not in (0, 1):
        raise ConfigError("params.spin doit valoir 0 ou 1")

    detunings = [hz_to_rad(value) for value in params["detunings_hz"]]
    scan = DressedLattice().admixture_scan(lattice, params["phases_rad"], detunings, spin=params["spin"],
                                          weighting=weighting, threads=config.get("threads"))
    rows = [(phase, rad_to_hz(detuning), spin, admixture) for phase, detuning, spin, admixture in scan]
    return write_table(config, ADMIXTURE_COLUMNS, rows)


def cmd_blockade_scan(config: ConfigManager) -> Path:
    params = config.params
    if params["axis"] not in ("gamma", "delta"):
        raise ConfigError(f"Axe de balayage inconnu: {params['axis']} (gamma ou delta)")

    points = GateSimulator().fidelity_scan(hz_to_rad(params["rabi_hz"]), params["ratios"], axis=params["axis"],
                                           delta_ratio=params["delta_ratio"], gamma_ratio=params["gamma_ratio"],
                                           threads=config.get("threads"))
    rows = [(p.ratio, p.loss_probability, p.process_fidelity, p.gamma_eff_prediction) for p in points]
    return write_table(config, BLOCKADE_COLUMNS, rows)


def cmd_report(config: ConfigManager) -> Path:
    """Rapport JSON : porte, sélectivité Zeeman, adressage, budget de décohérence"""
    params = config.params
    species = config.load_species()
    payload: Dict[str, Any] = {
        "species": _clean({
            "name": species.name,
            "mass_kg": species.mass,
            "clock_wavelength_m": species.clock_wavelength,
            "zeeman_hz_per_gauss": species.zeeman_coefficient,
            "p2_gradient_hz_per_cm_per_gauss_per_cm": species.p2_gradient_coefficient,
            "nuclear_spin": str(species.nuclear_spin),
        }),
    }

    if params.get("gate") is not None:
        payload["gate"] = _gate_section(params["gate"])
    if params.get("zeeman") is not None:
        payload["zeeman"] = _zeeman_section(params["zeeman"], species)
    if params.get("addressability") is not None:
        block = params["addressability"]
        report = SpinRegister().readout_addressability(
            GradientConfig(block["gradient_gauss_per_cm"], block["site_spacing_m"]), species,
            hz_to_rad(block["trap_hz"]), hz_to_rad(block["raman_rabi_hz"]), block["band_factor"])
        payload["addressability"] = _clean(asdict(report))
    if params.get("budget") is not None:
        payload["budget"] = _budget_section(params["budget"], species)

    return FileUtils.write_json(config.output_path, payload)


# --- Sections du rapport ---

def build_blockade_model(block: Dict[str, Any]) -> BlockadeModel:
    omega = hz_to_rad(block["rabi_hz"])
    delta, gamma = block["delta_ratio"] * omega, block["gamma_ratio"] * omega
    builders: Dict[str, Callable[[], BlockadeModel]] = {
        "perfect": lambda: BlockadeModel.perfect(omega),
        "interaction": lambda: BlockadeModel.interaction(omega, delta),
        "lossy": lambda: BlockadeModel.lossy(omega, gamma),
        "combined": lambda: BlockadeModel.combined(omega, delta, gamma),
    }
    if block["variant"] not in builders:
        raise ConfigError(f"Variante de blocage inconnue: {block['variant']}")
    return builders[block["variant"]]()


def _amplitudes(state: PairState) -> Dict[str, List[float]]:
    """Amplitudes non nulles en paires [re, im], indexées par 'a1,a2'"""
    amplitudes = {}
    for index, value in enumerate(state.amplitudes):
        if abs(value) > AMPLITUDE_CUTOFF:
            label = f"{ATOM_BASIS[index // len(ATOM_BASIS)]},{ATOM_BASIS[index % len(ATOM_BASIS)]}"
            amplitudes[label] = [float(value.real), float(value.imag)]
    return amplitudes


def gate_report_payload(report: GateReport) -> Dict[str, Any]:
    rows = {}
    for key, trace in report.truth_table.items():
        rows[key] = {
            "after_step_1": _amplitudes(trace.after_step_1),
            "after_step_2": _amplitudes(trace.after_step_2),
            "after_step_3": _amplitudes(trace.after_step_3),
            "loss_probability": float(trace.final.loss_probability),
            "colocated": trace.final.colocated,
        }
    return {
        "variant": report.model.variant.value,
        "truth_table": rows,
        "process_map": [[[float(v.real), float(v.imag)] for v in row] for row in report.process_map],
        "superposition_output": _amplitudes(PairState(report.superposition_output)),
        "process_fidelity": report.process_fidelity,
        "max_loss_probability": report.max_loss_probability,
        "residual_phase_rad": report.residual_phase,
    }


def _gate_section(block: Dict[str, Any]) -> Dict[str, Any]:
    model = build_blockade_model(block)
    simulator = GateSimulator()
    section = gate_report_payload(simulator.gate_truth_table(model))
    if model.gamma > 0:
        section["loss_to_gate_time_ratio"] = _finite(
            simulator.loss_to_gate_time_ratio(model.omega, model.delta, model.gamma))
    return section


def _zeeman_section(block: Dict[str, Any], species: Species) -> Dict[str, Any]:
    register = SpinRegister()
    pair = block["qubit_mI_pair"]
    if len(pair) != 2:
        raise ConfigError("qubit_mI_pair doit contenir deux valeurs")
    zeeman = ZeemanConfig(block["field_gauss"], species, tuple(pair))
    omega = hz_to_rad(block["rabi_hz"])
    selectivity = register.selectivity_margin(zeeman, omega, block["threshold"])
    return _clean({
        "resonance_offsets_hz": [register.resonance_offset(zeeman, m) for m in zeeman.qubit_mI_pair],
        "neighbour_spacing_hz": species.zeeman_coefficient * zeeman.field_B,
        "qubit_spacing_hz": selectivity.spacing_hz,
        "selectivity_ratio": selectivity.ratio,
        "selective": selectivity.selective,
        "threshold": selectivity.threshold,
        "required_field_gauss": register.required_field(species, omega, zeeman.qubit_mI_pair, block["threshold"]),
        "lattice_frequency_difference_hz": rad_to_hz(register.lattice_frequency_difference(zeeman)),
    })


def _budget_section(block: Dict[str, Any], species: Species) -> Dict[str, Any]:
    budget = BudgetInput(
        omega_trap=hz_to_rad(block["trap_hz"]),
        noise_freqs_hz=tuple(block["noise_freqs_hz"]),
        noise_psd=tuple(block["noise_psd_per_hz"]),
        epsilon=block["epsilon"],
        depth_fluctuation=block["depth_fluctuation"],
        detuning_noise=hz_to_rad(block["detuning_noise_hz"]),
        epsilon_3=block["epsilon_3"],
        gamma_3p0=hz_to_rad(block["gamma_3p0_hz"]),
        lattice_depth=hz_to_rad(block["lattice_depth_hz"]),
        rabi_frequency=hz_to_rad(block["rabi_hz"]),
        gate_time=block["gate_time_s"],
    )
    report = GateSimulator().decoherence_budget(budget, species)
    section = _clean(asdict(report))
    section["notes"] = list(report.notes)
    return section


COMMAND_HANDLERS: Dict[str, Callable[[ConfigManager], Path]] = {
    "potential_scan": cmd_potential_scan,
    "admixture_scan": cmd_admixture_scan,
    "blockade_scan": cmd_blockade_scan,
    "report": cmd_report,
}


def run_command(config: ConfigManager) -> Path:
    logger.info(f"Commande {config.command} -> {config.output_path}")
    return COMMAND_HANDLERS[config.command](config)
