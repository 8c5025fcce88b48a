#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Gestionnaire de sessions
Métadonnées d'un run (identifiant, état, empreintes des entrées) écrites
dans un fichier compagnon <sortie>.meta.json, séparé de l'artefact
reproductible.
"""

import json
import logging
import uuid
from dataclasses import asdict, dataclass, field
from datetime import datetime
from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional

from utils.file_utils import FileUtils

PACKAGE_VERSION = "1.0.0"


class RunStatus(Enum):
    """État d'un run"""
    CREATED = "created"
    RUNNING = "running"
    COMPLETED = "completed"
    FAILED = "failed"


@dataclass
class RunInfo:
    """Informations d'un run"""
    id: str
    command: str
    created_at: str
    last_modified: str
    status: RunStatus
    config_path: str
    config_hash: str
    preset_path: str
    preset_hash: str
    output_path: str
    output_hash: str = ""
    version: str = PACKAGE_VERSION
    notes: List[str] = field(default_factory=list)


class SessionManager:
    """Suivi d'un run de la ligne de commande"""

    def __init__(self, file_utils: Optional[FileUtils] = None):
        self.logger = logging.getLogger(__name__)
        self.file_utils = file_utils or FileUtils()
        self.current_run: Optional[RunInfo] = None

    @staticmethod
    def metadata_path(output_path: Path) -> Path:
        output_path = Path(output_path)
        return output_path.with_name(output_path.name + ".meta.json")

    def start_run(self, command: str, config_path: Path, preset_path: Path, output_path: Path) -> RunInfo:
        """
        Ouvre un run et calcule les empreintes SHA-256 des entrées

        Args:
            command: Commande exécutée
            config_path: Fichier de configuration
            preset_path: Préréglage d'espèce
            output_path: Artefact à produire

        Returns:
            Informations du run, état RUNNING
        """
        now = datetime.now().isoformat()
        self.current_run = RunInfo(
            id=f"run_{uuid.uuid4().hex[:12]}",
            command=command,
            created_at=now,
            last_modified=now,
            status=RunStatus.RUNNING,
            config_path=str(Path(config_path).absolute()),
            config_hash=self.file_utils.get_file_hash(config_path),
            preset_path=str(Path(preset_path).absolute()),
            preset_hash=self.file_utils.get_file_hash(preset_path),
            output_path=str(Path(output_path).absolute()),
        )
        self.logger.info(f"Run démarré: {self.current_run.id} ({command})")
        return self.current_run

    def update_run_status(self, status: RunStatus, note: Optional[str] = None):
        if self.current_run is None:
            raise RuntimeError("Aucun run en cours")

        self.current_run.status = status
        self.current_run.last_modified = datetime.now().isoformat()
        if note:
            self.current_run.notes.append(note)

        if status is RunStatus.COMPLETED:
            output = Path(self.current_run.output_path)
            self.current_run.output_hash = self.file_utils.get_file_hash(output)
            self._save_run_info(output, self.current_run)
        self.logger.info(f"Run {self.current_run.id}: {status.value}")

    def _save_run_info(self, output_path: Path, run_info: RunInfo) -> Path:
        """Sauvegarde les informations du run à côté de l'artefact"""
        data = self.to_dict(run_info)
        return self.file_utils.atomic_write_text(self.metadata_path(output_path),
                                                 json.dumps(data, indent=2, ensure_ascii=False) + "\n")

    @staticmethod
    def to_dict(run_info: RunInfo) -> Dict[str, Any]:
        data = asdict(run_info)
        data['status'] = run_info.status.value
        return data
