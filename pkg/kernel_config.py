"""
Kernel Configuration
Defaults from config.json, overridden by DIAGRAM_KERNEL_* environment variables
"""

import json
import logging
import os
from dataclasses import asdict, dataclass, fields, replace
from typing import Any, Dict, Optional

from dotenv import load_dotenv

logger = logging.getLogger(__name__)

ENV_PREFIX = "DIAGRAM_KERNEL_"
DEFAULT_CONFIG_FILE = os.path.join(os.path.dirname(os.path.abspath(__file__)), "config.json")
LOG_LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL")


@dataclass(frozen=True)
class KernelConfig:
    magnus_max_degree: int = 12
    homotopy_bound: int = 3
    cover_depth: int = 1
    log_level: str = "WARNING"

    def __post_init__(self):
        if self.magnus_max_degree < 1:
            raise ValueError(f"magnus_max_degree must be positive, got {self.magnus_max_degree}")
        if self.homotopy_bound < 0:
            raise ValueError(f"homotopy_bound must be non-negative, got {self.homotopy_bound}")
        if self.cover_depth < 0:
            raise ValueError(f"cover_depth must be non-negative, got {self.cover_depth}")
        if self.log_level not in LOG_LEVELS:
            raise ValueError(f"log_level must be one of {', '.join(LOG_LEVELS)}, got {self.log_level!r}")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class ConfigLoader:
    def __init__(self, config_file: Optional[str] = None):
        self.config_file = config_file or os.getenv(f"{ENV_PREFIX}CONFIG") or DEFAULT_CONFIG_FILE

    def _load_config(self) -> Dict[str, Any]:
        if not os.path.exists(self.config_file):
            logger.info(f"No configuration file at {self.config_file}, using defaults")
            return {}
        with open(self.config_file, "r") as f:
            try:
                data = json.load(f)
            except json.JSONDecodeError as e:
                raise ValueError(f"Malformed configuration file {self.config_file}: {e}") from e
        if not isinstance(data, dict):
            raise ValueError(f"Configuration file {self.config_file} must hold a JSON object")
        return data

    def _coerce(self, name: str, value: Any, kind: type) -> Any:
        if kind is int:
            if isinstance(value, bool):
                raise ValueError(f"{name} must be an integer, got {value!r}")
            try:
                return int(value)
            except (TypeError, ValueError):
                raise ValueError(f"{name} must be an integer, got {value!r}") from None
        return str(value).upper()

    def load(self) -> KernelConfig:
        values: Dict[str, Any] = {}
        data = self._load_config()
        known = {f.name: f.type for f in fields(KernelConfig)}
        for name, value in data.items():
            if name not in known:
                logger.warning(f"Ignoring unknown configuration key {name!r}")
                continue
            values[name] = self._coerce(name, value, known[name])
        for name, kind in known.items():
            raw = os.getenv(f"{ENV_PREFIX}{name.upper()}")
            if raw is not None:
                values[name] = self._coerce(name, raw, kind)
        return replace(KernelConfig(), **values)


def load_config(config_file: Optional[str] = None) -> KernelConfig:
    """Built-in defaults, overridden by the JSON file, overridden by the environment (.env included)"""
    load_dotenv()
    return ConfigLoader(config_file).load()
