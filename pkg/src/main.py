#!/usr/bin/env python3
# -*- coding: utf-8 -*-
"""
Dressed Lattice Simulator - Point d'entrée principal
Simulateur de réseaux optiques habillés dépendant du spin nucléaire et
de portes à blocage avec pertes

Version: 1.0.0
"""

import argparse
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

from core.exceptions import ConfigError, SimulationError
from core.session_manager import RunStatus, SessionManager

EXIT_OK = 0
EXIT_UNEXPECTED = 1
EXIT_CONFIG = 2
EXIT_DOMAIN = 3

LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


# Configuration du logging
def setup_logging(level: str = "INFO", log_to_file: bool = True):
    """
    Configure le système de logging

    Les messages vont sur la sortie d'erreur (jamais dans les artefacts)
    et, sauf désactivation, dans le répertoire de données de l'application.
    Le canal debug_trace n'est actif qu'au niveau DEBUG.
    """
    handlers: List[logging.Handler] = [logging.StreamHandler(sys.stderr)]
    if log_to_file:
        log_dir = get_app_data_directory() / "logs"
        log_dir.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_dir / "dressed_lattice_sim.log", encoding='utf-8'))

    numeric_level = getattr(logging, level.upper(), logging.INFO)
    logging.basicConfig(
        level=numeric_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True,
    )
    logging.getLogger('debug_trace').setLevel(logging.DEBUG if numeric_level <= logging.DEBUG else logging.WARNING)

    return logging.getLogger(__name__)


def get_app_data_directory() -> Path:
    """Retourne le répertoire de données de l'application"""
    if sys.platform == "win32":
        app_data = Path(os.environ.get('APPDATA', ''))
    elif sys.platform == "darwin":  # macOS
        app_data = Path.home() / "Library" / "Application Support"
    else:  # Linux
        app_data = Path.home() / ".local" / "share"

    return app_data / "Dressed-Lattice-Sim"


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dressed-lattice-sim",
        description="Réseaux optiques habillés et portes à blocage avec pertes : balayages CSV et rapports JSON",
    )
    parser.add_argument("--config", required=True, type=Path, help="Configuration de run (JSON)")
    parser.add_argument("--preset", help="Préréglage d'espèce (JSON), remplace la clé preset")
    parser.add_argument("--out", help="Fichier de sortie, remplace la clé output")
    parser.add_argument("--format", choices=("csv", "json"), help="Format de sortie")
    parser.add_argument("--threads", type=int, help="Nombre de fils pour les balayages")
    parser.add_argument("--log-level", default="INFO", choices=LOG_LEVELS, help="Niveau de log")
    parser.add_argument("--no-log-file", action="store_true", help="Ne pas écrire le fichier de log")
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    """Fonction principale de la ligne de commande"""
    args = build_parser().parse_args(argv)
    setup_logging(args.log_level, log_to_file=not args.no_log_file)
    logger = logging.getLogger(__name__)

    session = SessionManager()
    try:
        from cli.commands import run_command
        from utils.config_manager import ConfigManager

        config = ConfigManager(args.config, overrides={
            "preset": args.preset,
            "output": args.out,
            "format": args.format,
            "threads": args.threads,
        })
        session.start_run(config.command, config.config_path, config.preset_path, config.output_path)
        output = run_command(config)
        session.update_run_status(RunStatus.COMPLETED)
        logger.info(f"Terminé: {output}")
        return EXIT_OK

    except ConfigError as e:
        logger.error(f"Erreur de configuration: {e}")
        _fail(session, str(e))
        return EXIT_CONFIG

    except SimulationError as e:
        logger.error(f"Erreur de domaine: {e}")
        _fail(session, str(e))
        return EXIT_DOMAIN

    except Exception as e:
        logger.exception(f"Erreur inattendue: {e}")
        _fail(session, str(e))
        return EXIT_UNEXPECTED


def _fail(session: SessionManager, message: str):
    if session.current_run is not None:
        session.update_run_status(RunStatus.FAILED, message)


if __name__ == "__main__":
    # Vérification de la version Python
    if sys.version_info < (3, 8):
        print("Python 3.8 ou supérieur requis")
        sys.exit(1)

    sys.exit(main())
