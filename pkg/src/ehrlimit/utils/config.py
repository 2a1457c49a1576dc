"""
Configuration loading.

Settings come from the packaged ``config/defaults.yaml``, optionally
overridden by a user YAML file and finally by environment variables.
"""

import copy
import logging
import os
from pathlib import Path
from typing import Any, Dict, Optional

import yaml

from .errors import ParameterError

__all__ = ['DEFAULT_CONFIG_PATH', 'BUDGET_ENV_VAR', 'load_config']

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = Path(__file__).resolve().parent.parent / "config" / "defaults.yaml"
BUDGET_ENV_VAR = "EHRLIMIT_BUDGET"


def _deep_merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _deep_merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def _read_yaml(path: Path) -> Dict[str, Any]:
    with open(path, 'r', encoding='utf-8') as f:
        data = yaml.safe_load(f) or {}
    if not isinstance(data, dict):
        raise ParameterError(f"Configuration file {path} must contain a mapping")
    return data


def load_config(path: Optional[str] = None, environ: Optional[Dict[str, str]] = None) -> Dict[str, Any]:
    """
    Load the effective configuration.

    Args:
        path: Optional user YAML file merged over the packaged defaults
        environ: Environment mapping to read overrides from (defaults to os.environ)

    Returns:
        Nested configuration dictionary
    """
    config = _read_yaml(DEFAULT_CONFIG_PATH)

    if path is not None:
        user_path = Path(path)
        if not user_path.exists():
            raise FileNotFoundError(f"Config file not found: {user_path}")
        config = _deep_merge(config, _read_yaml(user_path))
        logger.debug(f"Merged configuration from {user_path}")

    environ = os.environ if environ is None else environ
    raw_budget = environ.get(BUDGET_ENV_VAR)
    if raw_budget:
        try:
            budget = int(raw_budget)
        except ValueError:
            raise ParameterError(f"{BUDGET_ENV_VAR} must be an integer, got {raw_budget!r}")
        if budget < 1:
            raise ParameterError(f"{BUDGET_ENV_VAR} must be positive, got {budget}")
        config['enumeration']['budget'] = budget
        logger.debug(f"Enumeration budget overridden by {BUDGET_ENV_VAR}: {budget}")

    return config
