# src/utils/config_manager.py
import copy
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional

from src.constants import DEFAULT_CONFIG, LOG_LEVELS, OUTPUT_FORMATS

# dotted keys that must hold a positive integer
POSITIVE_KEYS = (
    "enumeration.cap",
    "codes.materialize_cap",
    "feasibility.exact_value_limit",
    "feasibility.trial_division_bound",
    "feasibility.full_bits_cap",
    "search.pool_cap",
    "search.space_bits_cap",
)


class ConfigManager:
    """Manages run configuration: enumeration caps, bounds, threads and output format."""

    def __init__(self, config_file: Optional[str] = None):
        self.logger = logging.getLogger(__name__)
        self.config_file = Path(config_file) if config_file else None
        self.config: Dict[str, Any] = {}
        self.load_config()

    def save(self) -> bool:
        """Save current configuration to file."""
        if self.config_file is None:
            return True
        try:
            self.config_file.parent.mkdir(parents=True, exist_ok=True)

            with open(self.config_file, 'w') as f:
                json.dump(self.config, f, indent=4)

            self.logger.info("Configuration saved successfully")
            return True

        except OSError as e:
            self.logger.error(f"Error saving configuration: {e}")
            return False

    def load_config(self) -> bool:
        """Load configuration from file, falling back to the defaults."""
        self.config = self.get_default_config()
        if self.config_file is None:
            return True
        try:
            if self.config_file.exists():
                with open(self.config_file, 'r') as f:
                    self._deep_update(self.config, json.load(f))
                self.logger.info(f"Configuration loaded from {self.config_file}")
                return not self.repair()

            self.logger.info("No configuration file found, using defaults")
            return self.save()

        except (OSError, json.JSONDecodeError, AttributeError) as e:
            self.logger.error(f"Error loading configuration: {e}")
            self.config = self.get_default_config()
            return False

    def get(self, key: str, default: Any = None) -> Any:
        """Get configuration value; nested keys use dots (e.g. "enumeration.cap")."""
        value = self.config
        for k in key.split('.'):
            if not isinstance(value, dict):
                return default
            value = value.get(k)
            if value is None:
                return default
        return value

    def set(self, key: str, value: Any) -> bool:
        """Set configuration value."""
        keys = key.split('.')
        config = self.config

        for k in keys[:-1]:
            if not isinstance(config.get(k), dict):
                config[k] = {}
            config = config[k]

        config[keys[-1]] = value
        return True

    def update(self, new_config: Dict[str, Any]) -> bool:
        """Update multiple configuration values."""
        self._deep_update(self.config, new_config)
        return self.save()

    def _deep_update(self, d: Dict[str, Any], u: Dict[str, Any]) -> None:
        """Recursively update nested dictionary."""
        for k, v in u.items():
            if isinstance(v, dict) and k in d and isinstance(d[k], dict):
                self._deep_update(d[k], v)
            else:
                d[k] = v

    def problems(self) -> List[str]:
        """Dotted keys whose current value is unusable."""
        bad = [key for key in POSITIVE_KEYS
               if not isinstance(self.get(key), int) or isinstance(self.get(key), bool) or self.get(key) < 1]
        threads = self.get("runtime.threads")
        if not isinstance(threads, int) or threads < 0:
            bad.append("runtime.threads")
        if self.get("runtime.output_format") not in OUTPUT_FORMATS:
            bad.append("runtime.output_format")
        if str(self.get("logging.level", "")).upper() not in LOG_LEVELS:
            bad.append("logging.level")
        return bad

    def repair(self) -> List[str]:
        """Reset unusable values to their defaults; returns the keys that were reset."""
        defaults = self.get_default_config()
        bad = self.problems()
        for key in bad:
            fallback = defaults
            for k in key.split('.'):
                fallback = fallback[k]
            self.logger.warning(f"Invalid configuration value {key}={self.get(key)!r}, using {fallback!r}")
            self.set(key, fallback)
        return bad

    def feasibility_limits(self) -> Dict[str, int]:
        """Keyword arguments shared by the feasibility entry points."""
        return {
            "exact_value_limit": self.get("feasibility.exact_value_limit"),
            "bits_cap": self.get("feasibility.full_bits_cap"),
            "bound": self.get("feasibility.trial_division_bound"),
        }

    def get_default_config(self) -> Dict[str, Any]:
        """Get default configuration values."""
        return copy.deepcopy(DEFAULT_CONFIG)

    def reset_to_defaults(self) -> bool:
        """Reset configuration to default values."""
        self.config = self.get_default_config()
        return self.save()

    def export_config(self, filepath: str) -> bool:
        """Export configuration to file."""
        try:
            with open(filepath, 'w') as f:
                json.dump(self.config, f, indent=4)
            return True
        except OSError as e:
            self.logger.error(f"Error exporting configuration: {e}")
            return False

    def import_config(self, filepath: str) -> bool:
        """Import configuration from file."""
        try:
            with open(filepath, 'r') as f:
                new_config = json.load(f)
        except (OSError, json.JSONDecodeError) as e:
            self.logger.error(f"Error importing configuration: {e}")
            return False
        self.config = self.get_default_config()
        self._deep_update(self.config, new_config)
        self.repair()
        return self.save()
