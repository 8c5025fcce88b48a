#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Exceptions
Hiérarchie d'erreurs partagée par les moteurs de calcul et la ligne de commande.
"""


class SimulationError(Exception):
    """Erreur de base du simulateur"""


class DomainError(SimulationError, ValueError):
    """Paramètres physiquement invalides ou hors du domaine de validité"""


class IntegrationError(DomainError):
    """Échec de l'intégrateur (dérive de la trace, état non physique)"""


class ConfigError(ValueError):
    """Configuration de run invalide (schéma strict)"""
