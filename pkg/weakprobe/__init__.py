"""
Weakprobe

Direct measurement of polarization qubit states through weak values: a simulated optical
bench (Gaussian pointer, synthetic camera) and the reconstruction chain that turns its
frames into wavefunctions, Dirac distributions and density matrices.
"""
import logging
from dataclasses import dataclass
from typing import Optional

from .models import SimulatorConfig
from .services import CalibrationService, DetectorService, ExperimentService, ExportService

__version__ = '1.0.0'

logger = logging.getLogger(__name__)


@dataclass
class Services:
    config: SimulatorConfig
    detector: DetectorService
    calibration: CalibrationService
    experiment: ExperimentService
    export: ExportService


def load(config: Optional[SimulatorConfig] = None) -> Services:
    """
    Wire the services together

    Args:
        config: loaded configuration; defaults when omitted

    Returns:
        Services bundle shared by the command handlers
    """
    config = config or SimulatorConfig()

    detector_service = DetectorService()
    logger.info("Detector service initialized")

    calibration_service = CalibrationService()
    logger.info("Calibration service initialized")

    experiment_service = ExperimentService(detector_service, calibration_service)
    logger.info(f"Experiment service initialized (config digest {config.digest()[:12]})")

    export_service = ExportService()
    logger.info("Export service initialized")

    return Services(
        config=config,
        detector=detector_service,
        calibration=calibration_service,
        experiment=experiment_service,
        export=export_service,
    )
