"""
Weakprobe - Data Models

Plain value types shared by the services, plus the key/value config store
"""

from .state import Ket, DensityMatrix, RawMatrixEstimate, Basis, BasisLabel, StokesVector
from .weak import WeakValue, DiracDistribution, ReconstructedKet
from .pointer import PointerConfig, PointerProfile, Domain
from .detector import (
    NoiseModel,
    Roi,
    DetectorGeometry,
    DetectorFrame,
    CentroidEstimate,
    NF_D,
    NF_A,
    FF_D,
    FF_A,
    ROI_LABELS,
)
from .calibration import CalibrationConstants, CalibrationRecord, Outcome
from .config import SimulatorConfig
from .experiment import (
    ExperimentConfig,
    Mode,
    Metrics,
    Exp1Result,
    Exp2Result,
    ColumnReport,
    TomographyResult,
    SweepRow,
)
from .manifest import RunManifest, SCHEMA_VERSION

__all__ = [
    'Ket',
    'DensityMatrix',
    'RawMatrixEstimate',
    'Basis',
    'BasisLabel',
    'StokesVector',
    'WeakValue',
    'DiracDistribution',
    'ReconstructedKet',
    'PointerConfig',
    'PointerProfile',
    'Domain',
    'NoiseModel',
    'Roi',
    'DetectorGeometry',
    'DetectorFrame',
    'CentroidEstimate',
    'NF_D',
    'NF_A',
    'FF_D',
    'FF_A',
    'ROI_LABELS',
    'CalibrationConstants',
    'CalibrationRecord',
    'Outcome',
    'SimulatorConfig',
    'ExperimentConfig',
    'Mode',
    'Metrics',
    'Exp1Result',
    'Exp2Result',
    'ColumnReport',
    'TomographyResult',
    'SweepRow',
    'RunManifest',
    'SCHEMA_VERSION',
]
