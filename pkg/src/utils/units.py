#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Conversions d'unités
La configuration parle en Hz, gauss et mètres ; les moteurs en rad/s.
"""
import math

from scipy import constants as csts

HBAR = csts.hbar
CM = csts.centi
TWO_PI = 2.0 * math.pi


def hz_to_rad(frequency_hz: float) -> float:
    return TWO_PI * frequency_hz


def rad_to_hz(angular: float) -> float:
    return angular / TWO_PI


def m_to_cm(length_m: float) -> float:
    return length_m / CM


def rad_to_joule(angular: float) -> float:
    """Énergie ħ·ω associée à une pulsation (J)"""
    return HBAR * angular
