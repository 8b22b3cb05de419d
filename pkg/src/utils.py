#!/usr/bin/env python3
# -*- coding: utf-8 -*-

"""
Module contenant des fonctions utilitaires pour l'application :
configuration YAML, valeurs par défaut, formatage des réels et logging fichier.
"""

import copy
import logging
import math
from fractions import Fraction
from logging.handlers import RotatingFileHandler
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml

logger = logging.getLogger(__name__)


DEFAULT_CONFIG: Dict[str, Any] = {
    "numerics": {
        "max_total_dim": 4096,
        "norm_tol": 1e-12,
        "hermitian_tol": 1e-12,
        "zero_tol": 1e-10,
        "identity_tol": 1e-9,
        "lbps_threshold": 1e-8,
    },
    "canonical": {
        "restarts": 50,
        "initial_step": math.pi / 4,
        "min_step": 1e-4,
        "max_sweeps": 8,
    },
    "output": {
        "format": "text",
        "significant_digits": 12,
    },
    "logging": {
        "level": "WARNING",
        "file": None,
        "max_size": 10485760,
        "backup_count": 5,
    },
}


def load_config(config_path: str) -> Dict[str, Any]:
    """
    Charge un fichier de configuration YAML.

    Args:
        config_path: Chemin vers le fichier de configuration

    Returns:
        Dictionnaire contenant la configuration (vide si le fichier est vide)

    Raises:
        FileNotFoundError: Si le fichier n'existe pas
        yaml.YAMLError: Si le fichier n'est pas un YAML valide
    """
    logger.debug("Chargement de la configuration depuis %s", config_path)

    path = Path(config_path)
    if not path.exists():
        logger.error("Le fichier de configuration %s n'existe pas", config_path)
        raise FileNotFoundError(f"Le fichier {config_path} n'existe pas")

    try:
        with open(path, "r", encoding="utf-8") as file:
            config = yaml.safe_load(file)
            logger.debug("Configuration chargée avec succès")
            return config or {}
    except yaml.YAMLError as e:
        logger.error("Erreur lors du décodage du fichier YAML: %s", str(e))
        raise


def save_config(config: Dict[str, Any], config_path: Union[str, Path]) -> Path:
    """
    Écrit une configuration (typiquement la configuration effective) en YAML,
    dans un format relu tel quel par load_config.

    Returns:
        Le chemin du fichier écrit
    """
    path = Path(config_path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        yaml.safe_dump(config, default_flow_style=False, sort_keys=False, allow_unicode=True),
        encoding="utf-8",
    )
    logger.info("Configuration effective écrite dans %s", path)
    return path


def merge_config(base: Dict[str, Any], override: Optional[Dict[str, Any]]) -> Dict[str, Any]:
    """
    Fusionne récursivement une configuration utilisateur sur une configuration de base.

    Les sections imbriquées sont fusionnées clé par clé ; les autres valeurs
    de `override` remplacent celles de `base`. Aucun des deux dictionnaires
    n'est modifié.

    Args:
        base: Configuration de référence (typiquement DEFAULT_CONFIG)
        override: Configuration utilisateur, éventuellement None

    Returns:
        Nouveau dictionnaire fusionné
    """
    merged = copy.deepcopy(base)
    if not override:
        return merged

    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = merge_config(merged[key], value)
        else:
            if key not in merged:
                logger.warning("Clé de configuration inconnue: %s", key)
            merged[key] = copy.deepcopy(value)
    return merged


def load_effective_config(config_path: Optional[str]) -> Dict[str, Any]:
    """
    Charge la configuration effective : valeurs par défaut, puis fichier utilisateur s'il est fourni.

    Args:
        config_path: Chemin du fichier YAML, ou None pour les seules valeurs par défaut

    Returns:
        Configuration complète
    """
    if config_path is None:
        return merge_config(DEFAULT_CONFIG, None)
    return merge_config(DEFAULT_CONFIG, load_config(config_path))


def parse_fraction(text: str) -> float:
    """Convertit "0.4", "2" ou une fraction "1/3" en réel (ValueError sinon)."""
    try:
        return float(Fraction(text.strip()))
    except ZeroDivisionError as e:
        raise ValueError(f"dénominateur nul dans {text!r}") from e


def round_significant(value: float, digits: int = 12) -> float:
    """Arrondit un réel à `digits` chiffres significatifs (indépendant de la locale)."""
    if not math.isfinite(value):
        return value
    rounded = float(f"{value:.{digits}g}")
    # évite "-0.0" dans les sorties
    return rounded + 0.0


def format_real(value: float, digits: int = 12) -> str:
    """Formate un réel avec `digits` chiffres significatifs et '.' comme séparateur."""
    return f"{round_significant(value, digits):.{digits}g}"


def setup_rotating_file_logger(log_file: str, max_size: int, backup_count: int, log_level: str = "INFO") -> None:
    """
    Configure un logger avec rotation de fichiers.

    Args:
        log_file: Chemin vers le fichier de log
        max_size: Taille maximale du fichier de log en octets
        backup_count: Nombre de fichiers de sauvegarde à conserver
        log_level: Niveau de logging (DEBUG, INFO, WARNING, ERROR, CRITICAL)
    """
    log_path = Path(log_file)
    log_path.parent.mkdir(parents=True, exist_ok=True)

    file_handler = RotatingFileHandler(
        log_file,
        maxBytes=max_size,
        backupCount=backup_count,
        encoding="utf-8"
    )

    formatter = logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
    file_handler.setFormatter(formatter)
    file_handler.setLevel(getattr(logging, log_level))

    root_logger = logging.getLogger()
    root_logger.addHandler(file_handler)

    logger.debug("Logger fichier configuré avec rotation: %s, taille max: %d, copies: %d",
                 log_file, max_size, backup_count)
