"""Settings layer: defaults, JSON-with-comments config files, and overrides"""
import copy
import json
import logging
import os
from typing import Any
from typing import Dict
from typing import Optional

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_FILE = "var/config/autree.json"

DEFAULT_CONFIG: Dict[str, Any] = {
    "pattern_state_guard": 10000,
    "determinize_guard": 2**16,
    "presburger_search_budget": 5000000,
    "auta_node_budget": 200000,
    "autc_budget": 200000,
    "reorder_guard": 20000,
    "vdet_corpus": {
        "max_nodes": 4,
        "max_word_length": 1,
    },
    "logging": {
        "level": "WARNING",
        "format": "%(asctime)s %(levelname)s %(name)s: %(message)s",
    },
}

_settings: Optional[Dict[str, Any]] = None


def strip_comments(content: str) -> str:
    """Drop `#` comments that sit outside string literals"""
    cleaned_lines = []
    for line in content.split("\n"):
        if "#" in line:
            in_quotes = False
            escape_next = False
            comment_start = -1
            for i, char in enumerate(line):
                if escape_next:
                    escape_next = False
                    continue
                if char == "\\":
                    escape_next = True
                    continue
                if char == '"':
                    in_quotes = not in_quotes
                elif char == "#" and not in_quotes:
                    comment_start = i
                    break
            if comment_start >= 0:
                line = line[:comment_start].rstrip()
        cleaned_lines.append(line)
    return "\n".join(cleaned_lines)


def load_json_with_comments(file_path: str) -> Dict[str, Any]:
    """Load a JSON file that may contain # comments

    Returns an empty dict when the file does not exist.
    """
    if not os.path.exists(file_path):
        return {}

    with open(file_path, "r", encoding="utf-8") as f:
        return json.loads(strip_comments(f.read()))


def merge_config(base: Dict[str, Any], user_config: Dict[str, Any]) -> Dict[str, Any]:
    """Merge user values over base, one level deep for nested sections"""
    merged = copy.deepcopy(base)
    for key, value in user_config.items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key].update(value)
        else:
            merged[key] = value
    return merged


def load_config(config_file: str = DEFAULT_CONFIG_FILE) -> Dict[str, Any]:
    """Load configuration from a file and install it as the active settings

    Args:
        config_file: Path to a JSON-with-comments file.

    Returns:
        The merged configuration.
    """
    if os.path.exists(config_file):
        user_config = load_json_with_comments(config_file)
        logger.info("Configuration loaded from %s", config_file)
    else:
        user_config = {}
        logger.info("No %s found, using default configuration", config_file)

    return configure(user_config)


def configure(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Install defaults merged with `overrides` as the active settings"""
    global _settings
    _settings = merge_config(DEFAULT_CONFIG, overrides or {})
    return _settings


def settings() -> Dict[str, Any]:
    """Active settings; plain defaults until configure() or load_config() runs"""
    if _settings is None:
        return configure()
    return _settings


def setting(key: str, override: Optional[Any] = None) -> Any:
    """Pick an explicit override, else the active setting"""
    if override is not None:
        return override
    return settings()[key]
