#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Utilitaires de gestion de fichiers
Écritures atomiques et rendu déterministe des artefacts CSV / JSON
"""

import os
import tempfile
import logging
from pathlib import Path
from typing import Any, Iterable, Sequence
import hashlib
import json

import numpy as np

FLOAT_FORMAT = "%.17g"


class FileUtils:
    """Utilitaires pour la gestion des fichiers de sortie"""

    logger = logging.getLogger(__name__)

    @staticmethod
    def format_value(value: Any) -> str:
        """
        Formate une valeur de cellule CSV

        Les flottants utilisent 17 chiffres significatifs (aller-retour exact),
        les booléens et entiers leur représentation Python.
        """
        if isinstance(value, (bool, np.bool_)):
            return "true" if value else "false"
        if isinstance(value, (int, np.integer)):
            return str(int(value))
        if isinstance(value, (float, np.floating)):
            return FLOAT_FORMAT % float(value)
        return str(value)

    @classmethod
    def render_csv(cls, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> str:
        lines = [",".join(header)]
        for row in rows:
            if len(row) != len(header):
                raise ValueError(f"Ligne de {len(row)} colonnes pour un en-tête de {len(header)}")
            lines.append(",".join(cls.format_value(value) for value in row))
        return "\n".join(lines) + "\n"

    @staticmethod
    def render_json(payload: Any) -> str:
        """JSON déterministe : clés triées, indentation 2, sans horodatage"""
        return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False, allow_nan=False) + "\n"

    @classmethod
    def atomic_write_text(cls, path: Path, content: str) -> Path:
        """
        Écrit un fichier via un fichier temporaire du même répertoire puis os.replace

        Args:
            path: Fichier de destination
            content: Contenu texte (UTF-8)

        Returns:
            Chemin écrit
        """
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        fd, temp_path = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent)
        try:
            with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as f:
                f.write(content)
            os.replace(temp_path, path)
        except Exception:
            # Aucun fichier partiel ne doit rester
            if os.path.exists(temp_path):
                os.unlink(temp_path)
            raise

        cls.logger.info(f"Fichier écrit: {path}")
        return path

    @classmethod
    def write_csv(cls, path: Path, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> Path:
        return cls.atomic_write_text(path, cls.render_csv(header, rows))

    @classmethod
    def write_json(cls, path: Path, payload: Any) -> Path:
        return cls.atomic_write_text(path, cls.render_json(payload))

    @staticmethod
    def get_file_hash(file_path: Path) -> str:
        """
        Calcule le hash SHA-256 d'un fichier

        Args:
            file_path: Chemin vers le fichier

        Returns:
            Hash hexadécimal, chaîne vide si le fichier est illisible
        """
        hash_sha = hashlib.sha256()

        try:
            with open(file_path, "rb") as f:
                for chunk in iter(lambda: f.read(4096), b""):
                    hash_sha.update(chunk)
            return hash_sha.hexdigest()
        except OSError:
            return ""
