# -*- coding: utf-8 -*-
"""Fixtures partagées : src/ est ajouté au chemin d'import comme pour main.py"""
import math
import sys
from pathlib import Path

import pytest

SRC = Path(__file__).resolve().parent.parent / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))

from core.data_model import DressingField, LatticeConfig, StarkConfig  # noqa: E402
from utils.config_manager import load_species_preset  # noqa: E402

OMEGA = 2 * math.pi * 120.0e3


@pytest.fixture
def species():
    return load_species_preset()


def make_lattice(species, omega=OMEGA, detuning=-0.75 * OMEGA, stark_g=0.25 * OMEGA, stark_e=0.75 * OMEGA,
                 include_offresonant=True, phase=0.0):
    k = species.wavenumber
    return LatticeConfig(
        species=species,
        field_0=DressingField(omega, detuning, k, 0.0, spin_label=0),
        field_1=DressingField(omega, detuning, k, phase, spin_label=1),
        stark=StarkConfig(stark_g, stark_e),
        include_offresonant=include_offresonant,
    )


@pytest.fixture
def lattice_factory(species):
    def factory(**kwargs):
        return make_lattice(species, **kwargs)
    return factory
