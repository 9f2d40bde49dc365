"""
Helpers shared by the command handlers
"""
import logging
from pathlib import Path
from typing import Optional

from ..models import ExperimentConfig, RunManifest, SimulatorConfig

logger = logging.getLogger(__name__)


def resolve_path(store: SimulatorConfig, value: str) -> Path:
    """Relative paths in a config file are taken relative to that file"""
    path = Path(value)
    if not path.is_absolute() and store.source:
        candidate = Path(store.source).parent / path
        if candidate.exists():
            return candidate
    return path


def experiment_config(services, mode: Optional[str] = None, stored_constants: bool = True) -> ExperimentConfig:
    """Typed experiment parameters, with constants from calibration.file when configured and wanted"""
    store = services.config
    if mode:
        store.set('experiment.mode', mode)
    calibration = None
    calibration_file = store.get('calibration.file')
    if calibration_file and stored_constants:
        calibration = services.calibration.load_constants(resolve_path(store, calibration_file))
    return ExperimentConfig.from_config(store, calibration)


def output_dir(out: Optional[str]) -> Optional[Path]:
    if out is None:
        return None
    path = Path(out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def new_manifest(services, command: str) -> RunManifest:
    store = services.config
    return RunManifest(
        command=command,
        config_digest=store.digest(),
        seed=store.number('noise.seed', int),
    )
