#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Gestionnaire de configuration
Configuration de run JSON à schéma strict et préréglages d'espèces

Les fichiers de configuration parlent en Hz, gauss et mètres ; la
conversion en rad/s se fait dans les commandes.
"""

import copy
import json
import logging
import math
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Optional

from core.data_model import Species
from core.exceptions import ConfigError, DomainError

COMMANDS = ("potential_scan", "admixture_scan", "blockade_scan", "report")
FORMATS = ("csv", "json")
DEFAULT_PRESET = Path(__file__).resolve().parent.parent / "presets" / "sr87.json"

PRESET_KEYS = {"mass_kg", "clock_wavelength_m", "zeeman_hz_per_gauss",
               "p2_gradient_hz_per_cm_per_gauss_per_cm", "nuclear_spin_2I"}

# Listes qui ne peuvent pas être vides
NONEMPTY_LISTS = {
    "phases_rad": "La liste des phases doit être non vide (phases must be nonempty)",
    "detunings_hz": "La liste des désaccords doit être non vide",
    "ratios": "La grille de rapports doit être non vide",
}

# Sections de rapport que l'utilisateur peut désactiver avec null
OPTIONAL_SECTIONS = {"gate", "zeeman", "addressability", "budget"}

# Clés de premier niveau qui prennent un chemin ; les autres clés nulles sont numériques
RUN_PATH_KEYS = {"preset", "output"}


def _lattice_defaults() -> Dict[str, Any]:
    # Paramètres de la figure des potentiels : Ω = 4ΔE_g, ΔE_e = 3ΔE_g, δ = -3Ω/4
    return {
        "rabi_hz": 120.0e3,
        "detuning_hz": -90.0e3,
        "stark_g_hz": 30.0e3,
        "stark_e_hz": 90.0e3,
        "include_offresonant": True,
    }


def load_species_preset(path: Optional[Path] = None) -> Species:
    """
    Charge un préréglage d'espèce JSON (schéma strict)

    Args:
        path: Fichier de préréglage, ⁸⁷Sr par défaut

    Returns:
        Constantes de l'espèce
    """
    path = Path(path) if path is not None else DEFAULT_PRESET
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"Préréglage illisible {path}: {e}") from e

    if not isinstance(data, dict):
        raise ConfigError(f"Le préréglage {path} doit être un objet JSON")
    unknown = set(data) - PRESET_KEYS - {"name"}
    missing = PRESET_KEYS - set(data)
    if unknown or missing:
        raise ConfigError(f"Préréglage {path}: clés inconnues {sorted(unknown)}, manquantes {sorted(missing)}")
    if not isinstance(data["nuclear_spin_2I"], int) or isinstance(data["nuclear_spin_2I"], bool):
        raise ConfigError("nuclear_spin_2I doit être un entier")
    for key in PRESET_KEYS - {"nuclear_spin_2I"}:
        if not _is_finite_number(data[key]):
            raise ConfigError(f"Préréglage {path}: {key} doit être un nombre fini")

    try:
        return Species(
            mass=float(data["mass_kg"]),
            clock_wavelength=float(data["clock_wavelength_m"]),
            zeeman_coefficient=float(data["zeeman_hz_per_gauss"]),
            p2_gradient_coefficient=float(data["p2_gradient_hz_per_cm_per_gauss_per_cm"]),
            nuclear_spin=Fraction(data["nuclear_spin_2I"], 2),
            name=str(data.get("name", path.stem)),
        )
    except DomainError as e:
        raise ConfigError(f"Préréglage {path}: {e}") from e


def _is_finite_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


class ConfigManager:
    """Configuration d'un run de la ligne de commande"""

    def __init__(self, config_path: Path, overrides: Optional[Dict[str, Any]] = None):
        """
        Charge, fusionne et valide une configuration de run

        Args:
            config_path: Fichier JSON de configuration
            overrides: Valeurs issues de la ligne de commande (None = absent)
        """
        self.logger = logging.getLogger(__name__)
        self.config_path = Path(config_path)

        user_config = self._load_config(self.config_path)
        for key, value in (overrides or {}).items():
            if value is not None:
                user_config[key] = value

        command = user_config.get("command")
        if command not in COMMANDS:
            raise ConfigError(f"Commande inconnue: {command!r} (attendu: {', '.join(COMMANDS)})")

        default_config = self._get_default_config(command)
        self._validate(user_config, default_config, "")
        self.config = self._merge_configs(default_config, user_config)
        self._check_run_keys()

        self.logger.info(f"Configuration chargée: {self.config_path} ({command})")

    def _load_config(self, path: Path) -> Dict[str, Any]:
        try:
            with open(path, 'r', encoding='utf-8') as f:
                data = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            raise ConfigError(f"Configuration illisible {path}: {e}") from e
        if not isinstance(data, dict):
            raise ConfigError("La configuration doit être un objet JSON")
        return data

    def _get_default_config(self, command: str) -> Dict[str, Any]:
        """Retourne la configuration par défaut d'une commande"""
        params: Dict[str, Any]
        if command == "potential_scan":
            params = _lattice_defaults()
            params.update({
                "phases_rad": [0.0, math.pi / 4, math.pi / 2],
                "points_per_period": 256,
                "periods": 1,
            })
        elif command == "admixture_scan":
            params = _lattice_defaults()
            params.update({
                "phases_rad": [2 * math.pi * i / 32 for i in range(32)],
                "detunings_hz": [-60.0e3, -90.0e3, -120.0e3, -150.0e3],
                "spin": 1,
                "weighting": "uniform",
            })
        elif command == "blockade_scan":
            params = {
                "rabi_hz": 100.0e3,
                "axis": "gamma",
                "ratios": [2.0, 5.0, 10.0, 20.0, 50.0, 100.0],
                "delta_ratio": 0.0,
                "gamma_ratio": 0.0,
            }
        else:
            params = {
                "gate": {"variant": "perfect", "rabi_hz": 100.0e3, "delta_ratio": 0.0, "gamma_ratio": 0.0},
                "zeeman": {"field_gauss": 5000.0, "qubit_mI_pair": [-4.5, -3.5], "rabi_hz": 100.0e3,
                           "threshold": 10.0},
                "addressability": {"gradient_gauss_per_cm": 100.0, "site_spacing_m": None, "trap_hz": 15.0e3,
                                   "raman_rabi_hz": 1.0e3, "band_factor": 10.0},
                "budget": {"trap_hz": 15.0e3, "noise_freqs_hz": [], "noise_psd_per_hz": [], "epsilon": 1e-8,
                           "depth_fluctuation": 1e-3, "detuning_noise_hz": 0.0, "epsilon_3": 0.1,
                           "gamma_3p0_hz": 0.0, "lattice_depth_hz": 150.0e3, "rabi_hz": 120.0e3,
                           "gate_time_s": None},
            }

        return {
            "command": command,
            "preset": None,
            "params": params,
            "output": None,
            "format": "json" if command == "report" else "csv",
            "threads": 1,
        }

    def _validate(self, user: Dict[str, Any], default: Dict[str, Any], prefix: str):
        """Schéma strict : clés connues, types compatibles, nombres finis"""
        for key, value in user.items():
            path = f"{prefix}{key}"
            if key not in default:
                raise ConfigError(f"Clé inconnue: {path}")
            expected = default[key]

            if isinstance(expected, dict):
                if value is None and key in OPTIONAL_SECTIONS:
                    continue
                if not isinstance(value, dict):
                    raise ConfigError(f"{path} doit être un objet")
                self._validate(value, expected, f"{path}.")
            elif isinstance(expected, bool):
                if not isinstance(value, bool):
                    raise ConfigError(f"{path} doit être un booléen")
            elif isinstance(expected, (int, float)):
                if not _is_finite_number(value):
                    raise ConfigError(f"{path} doit être un nombre fini")
                if isinstance(expected, int) and not isinstance(value, int):
                    raise ConfigError(f"{path} doit être un entier")
            elif isinstance(expected, list):
                if not isinstance(value, list) or not all(_is_finite_number(item) for item in value):
                    raise ConfigError(f"{path} doit être une liste de nombres finis")
                if not value and key in NONEMPTY_LISTS:
                    raise ConfigError(NONEMPTY_LISTS[key])
            elif isinstance(expected, str):
                if not isinstance(value, str):
                    raise ConfigError(f"{path} doit être une chaîne")
            elif prefix == "" and key in RUN_PATH_KEYS:
                if value is not None and not isinstance(value, str):
                    raise ConfigError(f"{path} doit être un chemin")
            elif value is not None and not _is_finite_number(value):
                raise ConfigError(f"{path} doit être null ou un nombre fini")

    def _merge_configs(self, default: Dict, user: Dict) -> Dict:
        """Fusionne récursivement les configurations"""
        merged = copy.deepcopy(default)

        for key, value in user.items():
            if key in merged and isinstance(merged[key], dict) and isinstance(value, dict):
                merged[key] = self._merge_configs(merged[key], value)
            else:
                merged[key] = copy.deepcopy(value)

        return merged

    def _check_run_keys(self):
        if self.config["format"] not in FORMATS:
            raise ConfigError(f"Format inconnu: {self.config['format']} (csv ou json)")
        if self.command == "report" and self.config["format"] != "json":
            raise ConfigError("La commande report produit uniquement du JSON")
        if not isinstance(self.config["threads"], int) or self.config["threads"] < 1:
            raise ConfigError("threads doit être un entier >= 1")
        if not isinstance(self.config["output"], str) or not self.config["output"]:
            raise ConfigError("Chemin de sortie manquant (clé output ou option --out)")
        if self.config["preset"] is not None and not isinstance(self.config["preset"], str):
            raise ConfigError("preset doit être un chemin")

    def get(self, key_path: str, default=None):
        """
        Récupère une valeur de configuration par chemin

        Args:
            key_path: Chemin vers la clé (ex: "params.rabi_hz")
            default: Valeur par défaut si clé non trouvée
        """
        keys = key_path.split('.')
        value = self.config

        try:
            for key in keys:
                value = value[key]
            return value
        except (KeyError, TypeError):
            return default

    @property
    def command(self) -> str:
        return self.config["command"]

    @property
    def params(self) -> Dict[str, Any]:
        return self.config["params"]

    @property
    def output_path(self) -> Path:
        return Path(self.config["output"])

    @property
    def preset_path(self) -> Path:
        preset = self.config["preset"]
        if preset is None:
            return DEFAULT_PRESET
        path = Path(preset)
        # chemin relatif au fichier de configuration
        return path if path.is_absolute() or path.exists() else self.config_path.parent / path

    def load_species(self) -> Species:
        return load_species_preset(self.preset_path)
