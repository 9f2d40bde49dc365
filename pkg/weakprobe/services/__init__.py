"""
Weakprobe Services

State algebra and pointer physics as function modules, the measurement chain as services
"""

from . import qstate, weakcore, pointer
from .detector_service import DetectorService
from .calibration_service import CalibrationService
from .experiment_service import ExperimentService
from .export_service import ExportService

__all__ = [
    'qstate',
    'weakcore',
    'pointer',
    'DetectorService',
    'CalibrationService',
    'ExperimentService',
    'ExportService',
]
