"""
Central configuration module for qktdiscord.

Application settings (logging, numerical tolerances, runner defaults) are
loaded from a YAML or JSON file and merged over built-in defaults. Scenario
parameters live in separate JSON documents, see :mod:`qktdiscord.core.scenario`.
"""

import copy
import json
import math
import os
from typing import Any, Dict, Optional

import yaml

from qktdiscord.core.errors import ConfigError
from qktdiscord.utils.logging import get_logger

logger = get_logger("config")


class ConfigManager:
    """
    Manager for loading and accessing configuration settings.

    Files are searched in the working directory, then ``~/.qktdiscord``;
    ``$QKTDISCORD_CONFIG`` takes precedence over both.
    """

    DEFAULT_CONFIG = {
        "general": {
            "log_level": "INFO",
            "log_file": None,
        },
        "numerics": {
            "revival_threshold": 0.5,
            "revival_neighborhood": 5,
            "discord_coarse_grid": 64,
            "discord_refine_iters": 40,
            "eigensolver_iteration_factor": 50,
            "fit_floor": math.exp(-2.0),
        },
        "runner": {
            "seed": 12345,
            "max_workers": None,  # ThreadPoolExecutor default
            "oracle_stride": 50,
            "final_window_fraction": 1.0 / 3.0,
        },
    }

    def __init__(self):
        """Initialize with default configuration."""
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)
        self.config_file = None

    def load_config(self, config_file: Optional[str] = None) -> None:
        """
        Load configuration from a file.

        Args:
            config_file: Path to the configuration file. If not specified,
                         looks for config in standard locations.

        Raises:
            ConfigError: If an explicitly named file is missing or unreadable
        """
        explicit = config_file is not None
        if not config_file:
            potential_locations = [
                "./qktdiscord.yml",
                "./qktdiscord.yaml",
                "./qktdiscord.json",
                os.path.expanduser("~/.qktdiscord/config.yml"),
                os.path.expanduser("~/.qktdiscord/config.yaml"),
                os.path.expanduser("~/.qktdiscord/config.json"),
            ]

            if "QKTDISCORD_CONFIG" in os.environ:
                potential_locations.insert(0, os.environ["QKTDISCORD_CONFIG"])

            for loc in potential_locations:
                if os.path.isfile(loc):
                    config_file = loc
                    break

        if not config_file or not os.path.isfile(config_file):
            if explicit:
                raise ConfigError(f"settings file not found: {config_file}", key="settings")
            logger.debug("No configuration file found, using defaults")
            return

        try:
            with open(config_file, "r") as f:
                if config_file.endswith((".yml", ".yaml")):
                    file_config = yaml.safe_load(f) or {}
                elif config_file.endswith(".json"):
                    file_config = json.load(f)
                else:
                    raise ConfigError(f"unknown settings format: {config_file}", key="settings")
        except (OSError, yaml.YAMLError, json.JSONDecodeError) as e:
            raise ConfigError(f"cannot read {config_file}: {e}", key="settings") from e

        if not isinstance(file_config, dict):
            raise ConfigError(f"{config_file} must contain a mapping", key="settings")

        self.config_file = config_file
        self._update_nested_dict(self.config, file_config)
        logger.info(f"Loaded configuration from {config_file}")

    def _update_nested_dict(self, d: Dict, u: Dict) -> Dict:
        """
        Update a nested dictionary with values from another dictionary.

        Args:
            d: Dictionary to update
            u: Dictionary with new values

        Returns:
            Updated dictionary
        """
        for k, v in u.items():
            if isinstance(v, dict) and k in d and isinstance(d[k], dict):
                self._update_nested_dict(d[k], v)
            else:
                d[k] = v
        return d

    def reset(self) -> None:
        """Drop loaded values and return to the defaults."""
        self.config = copy.deepcopy(self.DEFAULT_CONFIG)
        self.config_file = None

    def get(self, section: str, key: str, default: Any = None) -> Any:
        """
        Get a configuration value.

        Args:
            section: Configuration section
            key: Configuration key
            default: Default value if not found

        Returns:
            Configuration value or default
        """
        try:
            return self.config[section][key]
        except KeyError:
            return default

    def get_section(self, section: str) -> Dict[str, Any]:
        """
        Get an entire configuration section.

        Args:
            section: Configuration section

        Returns:
            Section dictionary or empty dict if not found
        """
        return self.config.get(section, {})

    def save_sample_config(self, file_path: str, format: str = "yaml") -> None:
        """
        Save a sample configuration file.

        Args:
            file_path: Path where to save the file
            format: Format of the file (yaml or json)

        Raises:
            OSError: If the file cannot be written
        """
        directory = os.path.dirname(file_path)
        if directory:
            os.makedirs(directory, exist_ok=True)

        with open(file_path, "w") as f:
            if format.lower() == "json":
                json.dump(self.DEFAULT_CONFIG, f, indent=2)
            else:
                yaml.safe_dump(self.DEFAULT_CONFIG, f, default_flow_style=False)

        logger.info(f"Saved sample configuration to {file_path}")


# Create a singleton instance
config = ConfigManager()

# Load configuration on import; a broken discovered file must not break imports
try:
    config.load_config()
except ConfigError as e:
    logger.error(f"Ignoring settings file: {e}")


def get_config(section: str, key: str, default: Any = None) -> Any:
    """
    Get a configuration value.

    Args:
        section: Configuration section
        key: Configuration key
        default: Default value if not found

    Returns:
        Configuration value or default
    """
    return config.get(section, key, default)


def get_section(section: str) -> Dict[str, Any]:
    """Get an entire configuration section."""
    return config.get_section(section)


def load_config(config_file: str) -> None:
    """Load configuration from a file into the shared manager."""
    config.load_config(config_file)


def save_sample_config(file_path: str, format: str = "yaml") -> None:
    """Save a sample configuration file."""
    config.save_sample_config(file_path, format)
