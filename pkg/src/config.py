"""Configuration management for the Sierpinski domination toolkit."""

import copy
import os
import yaml
from pathlib import Path
from typing import Any, Dict, Optional

from dotenv import load_dotenv
from loguru import logger


class ConfigError(Exception):
    """Raised when a configuration value or environment override is unusable."""
    pass


class Config:
    """Operational settings for construction, verification and the exact solver.

    Defaults live in DEFAULT_CONFIG; USER-FILES/01.CONFIG/sdom_config.yml is
    merged over them, and SDOM_* environment variables (also read from a
    project-root .env file) override the capacity limits.
    """

    DEFAULT_CONFIG = {
        "limits": {
            "vertex_cap": 1_000_000,
            "member_cap": 10_000_000,
            "solver_vertex_cap": 64,
        },
        "verification": {
            "pair_threshold": 1_000_000,
            "sample_size": 10_000,
            "seed": 2024,
        },
        "solver": {
            "time_budget": None,
            "restrict_values": True,
            "lower_bound_mode": "degree_bound",
            "threads": None,
        },
    }

    # Environment variable -> (section, key)
    ENV_OVERRIDES = {
        "SDOM_VERTEX_CAP": ("limits", "vertex_cap"),
        "SDOM_MEMBER_CAP": ("limits", "member_cap"),
        "SDOM_SOLVER_VERTEX_CAP": ("limits", "solver_vertex_cap"),
    }

    # Directory Settings
    PROJECT_ROOT = Path(__file__).parent.parent
    USER_FILES = PROJECT_ROOT / "USER-FILES"
    CONFIG_DIR = USER_FILES / "01.CONFIG"
    OUTPUT_DIR = USER_FILES / "05.OUTPUT"
    ENV_FILE = PROJECT_ROOT / ".env"

    # Config file paths
    CONFIG_FILE = CONFIG_DIR / "sdom_config.yml"

    def __init__(self, config_file: Optional[Path] = None, environ: Optional[Dict[str, str]] = None):
        """Initialize configuration from file, environment, or defaults."""
        self.config_file = Path(config_file) if config_file else self.CONFIG_FILE
        if environ is None:
            load_dotenv(self.ENV_FILE)
            environ = dict(os.environ)
        self.config_data = self._load_config()
        self._apply_env_overrides(environ)

    def _load_config(self) -> Dict[str, Any]:
        """Load settings from YAML merged over the defaults."""
        config = copy.deepcopy(self.DEFAULT_CONFIG)
        if self.config_file.exists():
            try:
                with open(self.config_file, 'r') as f:
                    user_config = yaml.safe_load(f) or {}
                self._deep_merge(config, user_config)
            except Exception as e:
                logger.warning(f"Could not load config from {self.config_file}: {e}")
                logger.warning("Using default configuration")
                return copy.deepcopy(self.DEFAULT_CONFIG)
        return config

    def _apply_env_overrides(self, environ: Dict[str, str]) -> None:
        for variable, (section, key) in self.ENV_OVERRIDES.items():
            raw = environ.get(variable)
            if raw is None or raw == "":
                continue
            try:
                value = int(raw)
            except ValueError:
                raise ConfigError(f"{variable} must be an integer, got {raw!r}")
            if value < 1:
                raise ConfigError(f"{variable} must be positive, got {value}")
            logger.debug(f"{variable} overrides {section}.{key} = {value}")
            self.config_data[section][key] = value

    def _deep_merge(self, base: Dict, updates: Dict) -> None:
        """Deep merge updates into base dictionary."""
        for key, value in updates.items():
            if key in base and isinstance(base[key], dict) and isinstance(value, dict):
                self._deep_merge(base[key], value)
            else:
                base[key] = value

    def save_config(self) -> Path:
        """Save current configuration to YAML file."""
        self.config_file.parent.mkdir(parents=True, exist_ok=True)
        with open(self.config_file, 'w') as f:
            yaml.dump(self.config_data, f, default_flow_style=False, sort_keys=False)
        return self.config_file

    def _positive_int(self, section: str, key: str) -> int:
        value = self.config_data[section][key]
        if not isinstance(value, int) or isinstance(value, bool) or value < 1:
            raise ConfigError(f"{section}.{key} must be a positive integer, got {value!r}")
        return value

    @property
    def vertex_cap(self) -> int:
        """Largest n^t for whole-graph scans (BFS, domination checks, exports)."""
        return self._positive_int("limits", "vertex_cap")

    @property
    def member_cap(self) -> int:
        """Largest |D_{n,t}| that is materialized."""
        return self._positive_int("limits", "member_cap")

    @property
    def solver_vertex_cap(self) -> int:
        return self._positive_int("limits", "solver_vertex_cap")

    @property
    def pair_threshold(self) -> int:
        """Pair count above which distance separation is sampled."""
        return self._positive_int("verification", "pair_threshold")

    @property
    def sample_size(self) -> int:
        return self._positive_int("verification", "sample_size")

    @property
    def seed(self) -> int:
        return int(self.config_data["verification"]["seed"])

    @property
    def time_budget(self) -> Optional[float]:
        """Solver time budget in seconds, None for unlimited."""
        value = self.config_data["solver"]["time_budget"]
        return None if value is None else float(value)

    @property
    def restrict_values(self) -> bool:
        return bool(self.config_data["solver"]["restrict_values"])

    @property
    def lower_bound_mode(self) -> str:
        return str(self.config_data["solver"]["lower_bound_mode"])

    @property
    def threads(self) -> int:
        """Solver workers; defaults to all cores."""
        value = self.config_data["solver"]["threads"]
        return int(value) if value else (os.cpu_count() or 1)

    @classmethod
    def get_output_path(cls) -> Path:
        """Get the output directory path."""
        return cls.OUTPUT_DIR
