import os
import yaml
import logging
from typing import Any, Dict, Optional

from dotenv import load_dotenv

from .models import RunConfig

load_dotenv()

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = os.path.join(os.path.dirname(__file__), '..', 'sedecim.yaml')

ENV_OVERRIDES = {
    'SEDECIM_JOBS': 'jobs',
    'SEDECIM_ORACLE_CAP': 'oracle_cap',
}


def config_path() -> str:
    return os.getenv('SEDECIM_CONFIG', DEFAULT_CONFIG_PATH)


def load_settings(path: Optional[str] = None) -> Dict[str, Any]:
    path = path or config_path()
    try:
        with open(path, 'r') as f:
            return yaml.safe_load(f) or {}
    except FileNotFoundError:
        logger.warning(f"{path} not found, using built-in defaults")
        return {}


def build_run_config(overrides: Optional[Dict[str, Any]] = None, settings: Optional[Dict[str, Any]] = None) -> RunConfig:
    """YAML defaults, then SEDECIM_* environment variables, then explicit overrides"""
    if settings is None:
        settings = load_settings()
    values: Dict[str, Any] = dict(settings.get('run', {}) or {})
    for env_name, field in ENV_OVERRIDES.items():
        raw = os.getenv(env_name)
        if raw:
            values[field] = raw
    for key, value in (overrides or {}).items():
        if value is not None:
            values[key] = value
    return RunConfig(**values)


def generator_settings(settings: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    if settings is None:
        settings = load_settings()
    section = settings.get('generator_search', {}) or {}
    return {
        'bound_scale': float(section.get('bound_scale', 4.5)),
        'max_attempts': int(section.get('max_attempts', 4)),
        'delta': float(section.get('lll_delta', 0.99)),
    }


def report_settings(settings: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    if settings is None:
        settings = load_settings()
    section = settings.get('reports', {}) or {}
    return {
        'decimals': int(section.get('decimals', 6)),
        'cancellation_factor': float(section.get('cancellation_factor', 3)),
    }
