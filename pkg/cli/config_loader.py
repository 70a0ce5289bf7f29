"""
Runtime configuration: config/local_config.json with environment overrides.
"""

import json
import logging
import os
from pathlib import Path
from typing import Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = "./config/local_config.json"

DEFAULTS = {
    'formats_path': './config/formats',
    'lexicon_path': './config/lexicons/english_demo.txt',
    'grammar_path': './config/grammars/english_demo.grammar',
    'default_format': 'PLAIN_LATIN',
    'default_font': 'COURIER_DEMO',
    'page_width_px': 200,
    'resolution_scale': '1',
    'analog': {'grid_rows': 4, 'grid_cols': 4, 'min_region_px': 16},
    'disambiguation': {'max_expansions': 1000},
    'database': {'path': './data/provenance.db'},
    'logging': {'level': 'WARNING', 'format': 'text'},
}

# Environment variable -> (section, key); a None section means a top-level key
ENV_OVERRIDES = {
    'ICO_FORMATS_PATH': (None, 'formats_path'),
    'ICO_LOG_LEVEL': ('logging', 'level'),
    'ICO_DATABASE_PATH': ('database', 'path'),
}


def _merge(base: Dict, override: Dict) -> Dict:
    merged = dict(base)
    for key, value in override.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Optional[str] = None) -> Dict:
    """
    Load configuration.

    Args:
        config_path: JSON file; defaults to ICO_CONFIG_PATH or config/local_config.json

    Returns:
        Defaults merged with the file and then with environment overrides
    """
    load_dotenv()
    path = Path(config_path or os.getenv('ICO_CONFIG_PATH', DEFAULT_CONFIG_PATH))

    config = dict(DEFAULTS)
    if path.exists():
        try:
            with open(path, 'r', encoding='utf-8') as f:
                config = _merge(config, json.load(f))
        except Exception as e:
            logger.error(f"Failed to load config {path}: {e}")
            raise
    else:
        logger.debug(f"No config file at {path}, using defaults")

    for variable, (section, key) in ENV_OVERRIDES.items():
        value = os.getenv(variable)
        if not value:
            continue
        if section is None:
            config[key] = value
        else:
            config[section] = dict(config.get(section, {}), **{key: value})
    return config
