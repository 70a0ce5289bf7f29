"""
CLI Module
Handles the carrier-identity command line.
"""

from .chain_manifest import ManifestEntry, load_chain, parse_manifest
from .config_loader import load_config
from .errors import ManifestError
from .logging_setup import configure_logging
from .main import run

__all__ = ['run', 'load_config', 'configure_logging', 'parse_manifest', 'load_chain', 'ManifestEntry', 'ManifestError']
