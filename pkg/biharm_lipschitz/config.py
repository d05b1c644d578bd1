"""
Package configuration loaded from the YAML files shipped with the code.

defaults.yaml holds numerical defaults and tolerance bands, corpus.yaml the
named test functions, suite.yaml the parameter matrix of the verification
suite. Files are parsed once and cached.
"""

from pathlib import Path
from typing import Any, Dict, Optional

import yaml

_CONFIG_DIR = Path(__file__).parent

# Cache of parsed YAML files keyed by file name
_YAML_CACHE: Dict[str, Dict[str, Any]] = {}


def load_yaml(filename: str) -> Dict[str, Any]:
    """
    Load a package YAML file, caching the parsed mapping.

    Args:
        filename: File name relative to the package directory (e.g. 'corpus.yaml')

    Returns:
        Parsed mapping (empty dict for an empty file)
    """
    if filename not in _YAML_CACHE:
        with open(_CONFIG_DIR / filename, 'r') as f:
            _YAML_CACHE[filename] = yaml.safe_load(f) or {}
    return _YAML_CACHE[filename]


def default(section: str, key: Optional[str] = None, fallback: Any = None) -> Any:
    """
    Look up a value in defaults.yaml.

    Args:
        section: Top-level section (e.g. 'grid', 'bands')
        key: Key inside the section; None returns the whole section
        fallback: Returned when the section or key is missing

    Example:
        >>> default('bands', 'drift')
        0.25
    """
    data = load_yaml('defaults.yaml').get(section, fallback if key is None else {})
    if key is None:
        return data
    if not isinstance(data, dict):
        return fallback
    return data.get(key, fallback)
