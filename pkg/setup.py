#!/usr/bin/env python3
# -*- coding: utf-8 -*-
from setuptools import setup, find_packages

# Dépendances de production (le strict minimum pour que le simulateur fonctionne)
INSTALL_REQUIRES = [
    "numpy>=1.22",
    "scipy>=1.8",
]

# Dépendances de développement (outils pour le développeur)
DEV_REQUIRES = [
    "pytest>=7.4.3",
    "flake8>=6.1.0",
]

setup(
    name="dressed-lattice-sim",
    version="1.0.0",
    description="Simulateur de réseaux optiques habillés et de portes à blocage avec pertes.",
    packages=find_packages(where="src"),
    package_dir={"": "src"},
    py_modules=["main"],
    package_data={"presets": ["*.json"]},
    python_requires=">=3.8",
    install_requires=INSTALL_REQUIRES,
    extras_require={"dev": DEV_REQUIRES},
    entry_points={"console_scripts": ["dressed-lattice-sim=main:main"]},
)
