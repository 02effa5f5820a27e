"""
Configuration defaults and config-file loading.

A config file is a flat JSON (or YAML) mapping whose keys mirror the long
command-line flags with dashes turned into underscores. Flags win over the
file, the file wins over DEFAULTS.
"""

import json
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml
from loguru import logger

from nlca.errors import ParameterError

CONFIG_ENV_VAR = "NLCA_CONFIG"
WORKERS_ENV_VAR = "NLCA_WORKERS"

DEFAULTS: Dict[str, Any] = {
    "format": None,
    "dtype": "f32",
    "seed": 0,
    "workers": 1,
    "noise_reference": "8bit",
    "filter": "nlca",
    "sigma": "auto",
    "patch_radius": 1,
    "search_radius": 5,
    "c1": 0.9,
    "c2": 0.5,
    "window_radius": 3,
    "c1_const": 6.5025,
    "c2_const": 58.5225,
    "levels": [5, 10, 15, 20],
    "filters": ["ca", "nlca"],
    "sigma_policy": "exact",
    "repeats": 1,
    "modality": "T1w",
    "crop": None,
    "residual": None,
    "json": None,
    "kind": "brain",
    "dims": [64, 64, 64],
}


def _read_mapping(path: Path) -> Dict[str, Any]:
    with open(path, "r") as f:
        if path.suffix in (".yaml", ".yml"):
            contents = yaml.safe_load(f) or {}
        else:
            contents = json.load(f)
    if not isinstance(contents, dict):
        raise ParameterError(f"Config file {path} must hold a mapping at the top level")
    return contents


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """Merges DEFAULTS, the config file (`path` or $NLCA_CONFIG) and $NLCA_WORKERS."""
    config = dict(DEFAULTS)
    path = path or os.environ.get(CONFIG_ENV_VAR)
    if path:
        try:
            contents = _read_mapping(Path(path))
        except (json.JSONDecodeError, yaml.YAMLError) as e:
            raise ParameterError(f"Invalid config file {path}: {e}") from e
        for key, value in contents.items():
            key = key.replace("-", "_")
            if key not in DEFAULTS:
                logger.warning(f"Ignoring unknown config key {key!r} in {path}")
                continue
            config[key] = value
        logger.debug(f"Loaded configuration from {path}")
    if os.environ.get(WORKERS_ENV_VAR):
        config["workers"] = int(os.environ[WORKERS_ENV_VAR])
    return config
