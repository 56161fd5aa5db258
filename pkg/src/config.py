"""Configuration loader for qmqv."""

import copy
import os
from pathlib import Path

import yaml

MAX_WORDS_ENV = "QMQV_MAX_WORDS"

DEFAULT_CONFIG: dict = {
    "degree_bounds": {
        "identity": 4,
        "pbw_small": 4,
        "pbw_large": 3,
        "pbw_large_threshold": 8,
        "equivariance": 2,
        "fourier": 6,
    },
    "guards": {"max_generators": 20, "max_words": 160_000},
    "flatness": {"component_bound": 6},
    "crosscheck": {"points": 3, "seed": 20240229},
    "degeneration": {"order": 2},
    "logging": {"level": "WARNING"},
}


class ConfigError(ValueError):
    """Invalid configuration value."""


def _merge(base: dict, override: dict) -> dict:
    out = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], value)
        else:
            out[key] = value
    return out


def apply_environment(config: dict) -> dict:
    """Apply QMQV_MAX_WORDS on top of the loaded values."""
    raw = os.environ.get(MAX_WORDS_ENV)
    if raw is None or raw.strip() == "":
        return config
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{MAX_WORDS_ENV} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{MAX_WORDS_ENV} must be positive, got {value}")
    config = copy.deepcopy(config)
    config["guards"]["max_words"] = value
    return config


def load_config(config_path: str | Path = "config.yaml") -> dict:
    """Load configuration from a YAML file, merged over the defaults."""
    config_path = Path(config_path)

    if not config_path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")

    with open(config_path, encoding="utf-8") as f:
        loaded = yaml.safe_load(f)

    if loaded is not None and not isinstance(loaded, dict):
        raise ConfigError(f"{config_path}: top level must be a mapping")
    return apply_environment(_merge(DEFAULT_CONFIG, loaded or {}))


def get_config() -> dict:
    """Get configuration, searching in common locations; defaults if none is found."""
    search_paths = [
        Path("config.yaml"),
        Path(__file__).parent.parent / "config.yaml",
    ]

    for path in search_paths:
        if path.exists():
            return load_config(path)

    return apply_environment(copy.deepcopy(DEFAULT_CONFIG))
