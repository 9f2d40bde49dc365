"""
Simulator Configuration Model
"""
import hashlib
import json
import logging
from pathlib import Path
from typing import Any, Optional

import yaml

from ..errors import ConfigError

logger = logging.getLogger(__name__)


class SimulatorConfig:
    """
    Simulator configuration (key-value store)

    Keys are dotted `section.name` strings. Files are sectioned YAML (JSON is accepted by the
    same loader) and are flattened into the store on load.
    """

    DEFAULTS = {
        'pointer.sigma': 1.0,
        'pointer.delta': 0.1,
        'pointer.grid_n': 1024,
        'pointer.grid_span': None,
        'noise.photon_budget': 1e6,
        'noise.read_noise_std': 0.0,
        'noise.background_offset': 0.0,
        'noise.seed': 1234,
        'noise.shot_noise': True,
        'detector.roi_width': 128,
        'detector.roi_height': 64,
        'detector.frame_width': 512,
        'detector.frame_height': 256,
        'detector.y_width': 8.0,
        'detector.a_offset_px': 0.0,
        'experiment.frames': 100,
        'experiment.mode': 'exp2',
        'experiment.workers': 4,
        'calibration.file': None,
        'calibration.states': None,
        'calibration.frames': None,
    }

    def __init__(self, values: Optional[dict] = None):
        self._values = {}
        self.source = None
        self._initialize_defaults()
        for key, value in (values or {}).items():
            self.set(key, value)

    def _initialize_defaults(self):
        """Populate every known key with its default"""
        self._values.update(self.DEFAULTS)

    @classmethod
    def from_file(cls, path) -> 'SimulatorConfig':
        path = Path(path)
        if not path.is_file():
            logger.error(f"Config file not found: {path}")
            raise ConfigError(f"Config file not found: {path}")
        try:
            document = yaml.safe_load(path.read_text(encoding='utf-8'))
        except yaml.YAMLError as e:
            logger.error(f"Cannot parse config {path}: {e}")
            raise ConfigError(f"Cannot parse config {path}: {e}") from e
        if document is None:
            document = {}
        if not isinstance(document, dict):
            raise ConfigError(f"Config {path} must be a mapping of sections")
        config = cls(_flatten(document))
        config.source = str(path)
        logger.info(f"Loaded config from {path} (digest {config.digest()[:12]})")
        return config

    def get(self, key: str, default: Any = None) -> Any:
        """Get config value"""
        value = self._values.get(key)
        return default if value is None else value

    def set(self, key: str, value: Any):
        """Set config value"""
        if key not in self.DEFAULTS:
            logger.warning(f"Unknown config key '{key}'")
        self._values[key] = value

    def get_all(self) -> dict:
        """Get all config as dict"""
        return dict(self._values)

    def digest(self) -> str:
        """SHA-256 of the canonical JSON of the store, independent of key order"""
        canonical = json.dumps(self._values, sort_keys=True, separators=(',', ':'), default=str)
        return hashlib.sha256(canonical.encode('utf-8')).hexdigest()

    def number(self, key: str, kind=float):
        """Typed read, ConfigError on values that are not numbers"""
        value = self.get(key)
        if isinstance(value, bool):
            raise ConfigError(f"{key} must be a number, got {value!r}")
        try:
            return kind(value)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{key} must be a number, got {value!r}") from e

    def flag(self, key: str) -> bool:
        value = self.get(key)
        if isinstance(value, bool):
            return value
        if isinstance(value, str) and value.lower() in ('true', 'yes', 'on', '1', 'false', 'no', 'off', '0'):
            return value.lower() in ('true', 'yes', 'on', '1')
        raise ConfigError(f"{key} must be true or false, got {value!r}")


def _flatten(document: dict, prefix: str = '') -> dict:
    flat = {}
    for key, value in document.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, dict):
            flat.update(_flatten(value, f"{dotted}."))
        else:
            flat[dotted] = value
    return flat
