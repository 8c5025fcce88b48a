# -*- coding: utf-8 -*-
"""Tests du gestionnaire de configuration et des préréglages"""
import json
from fractions import Fraction

import pytest

from core.exceptions import ConfigError
from utils.config_manager import ConfigManager, load_species_preset


def write_config(tmp_path, payload, name="run.json"):
    path = tmp_path / name
    if isinstance(payload, str):
        path.write_text(payload, encoding="utf-8")
    else:
        path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_defaults_are_merged(tmp_path):
    path = write_config(tmp_path, {"command": "potential_scan", "params": {"rabi_hz": 50.0e3}, "output": "a.csv"})
    config = ConfigManager(path)
    assert config.get("params.rabi_hz") == 50.0e3
    assert config.get("params.points_per_period") == 256
    assert config.get("format") == "csv"
    assert config.get("params.missing", "x") == "x"
    assert config.output_path.name == "a.csv"


def test_overrides_take_precedence(tmp_path):
    path = write_config(tmp_path, {"command": "blockade_scan", "output": "a.csv"})
    config = ConfigManager(path, overrides={"output": "b.json", "format": "json", "threads": 3, "preset": None})
    assert config.output_path.name == "b.json"
    assert config.get("format") == "json"
    assert config.get("threads") == 3


@pytest.mark.parametrize("payload", [
    {"command": "potential_scan", "output": "a.csv", "colour": "blue"},
    {"command": "potential_scan", "output": "a.csv", "params": {"rabi": 1.0}},
    {"command": "potential_scan", "output": "a.csv", "params": {"rabi_hz": "fast"}},
    {"command": "potential_scan", "output": "a.csv", "params": {"points_per_period": 12.5}},
    {"command": "potential_scan", "output": "a.csv", "params": {"include_offresonant": 1}},
    {"command": "potential_scan"},
    {"command": "rotate", "output": "a.csv"},
    {"command": "report", "output": "a.csv", "format": "csv"},
    {"command": "blockade_scan", "output": "a.csv", "threads": 0},
    {"command": "blockade_scan", "output": "a.csv", "params": {"ratios": []}},
    {"command": "report", "output": "r.json", "params": {"addressability": {"site_spacing_m": "abc"}}},
    {"command": "report", "output": "r.json", "params": {"budget": {"gate_time_s": "1ms"}}},
    {"command": "report", "output": "r.json", "params": {"budget": {"gate_time_s": [1e-3]}}},
    {"command": "potential_scan", "output": 3},
])
def test_invalid_configs_are_rejected(tmp_path, payload):
    with pytest.raises(ConfigError):
        ConfigManager(write_config(tmp_path, payload))


def test_empty_phase_list_message(tmp_path):
    path = write_config(tmp_path, {"command": "potential_scan", "output": "a.csv", "params": {"phases_rad": []}})
    with pytest.raises(ConfigError, match="phases must be nonempty"):
        ConfigManager(path)


def test_non_finite_numbers_are_rejected(tmp_path):
    path = write_config(tmp_path, '{"command": "potential_scan", "output": "a.csv", "params": {"rabi_hz": Infinity}}')
    with pytest.raises(ConfigError):
        ConfigManager(path)


def test_unreadable_config(tmp_path):
    with pytest.raises(ConfigError):
        ConfigManager(tmp_path / "absent.json")
    with pytest.raises(ConfigError):
        ConfigManager(write_config(tmp_path, "{not json"))


def test_report_sections_can_be_disabled(tmp_path):
    path = write_config(tmp_path, {"command": "report", "output": "r.json", "params": {"budget": None}})
    config = ConfigManager(path)
    assert config.params["budget"] is None
    assert config.params["gate"]["variant"] == "perfect"


def test_default_preset_is_strontium():
    species = load_species_preset()
    assert species.nuclear_spin == Fraction(9, 2)
    assert species.zeeman_coefficient == 109.0
    assert species.clock_wavelength == pytest.approx(698.445e-9)


def test_preset_path_is_relative_to_config(tmp_path):
    preset = {"name": "test", "mass_kg": 1.0e-25, "clock_wavelength_m": 700e-9, "zeeman_hz_per_gauss": 100.0,
              "p2_gradient_hz_per_cm_per_gauss_per_cm": 4.0e6, "nuclear_spin_2I": 3}
    (tmp_path / "presets").mkdir()
    (tmp_path / "presets" / "test.json").write_text(json.dumps(preset), encoding="utf-8")
    path = write_config(tmp_path, {"command": "report", "output": "r.json", "preset": "presets/test.json"})

    species = ConfigManager(path).load_species()
    assert species.name == "test"
    assert species.nuclear_spin == Fraction(3, 2)


def test_strict_preset_schema(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps({"name": "x", "mass_kg": 1.0}), encoding="utf-8")
    with pytest.raises(ConfigError):
        load_species_preset(bad)


def test_nullable_numbers_accept_null_or_number(tmp_path):
    params = {"addressability": {"site_spacing_m": 4.0e-7}, "budget": {"gate_time_s": None}}
    config = ConfigManager(write_config(tmp_path, {"command": "report", "output": "r.json", "params": params}))
    assert config.params["addressability"]["site_spacing_m"] == 4.0e-7
    assert config.params["budget"]["gate_time_s"] is None
