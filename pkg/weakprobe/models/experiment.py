"""
Experiment configuration and result models
"""
from dataclasses import dataclass, field
from enum import Enum
from typing import Optional

from ..errors import ConfigError
from .calibration import Outcome
from .config import SimulatorConfig
from .detector import CentroidEstimate, DetectorGeometry, NoiseModel
from .pointer import PointerConfig
from .state import RawMatrixEstimate, StokesVector
from .weak import DiracDistribution, ReconstructedKet


def _pair(z: complex) -> list:
    return [z.real, z.imag]


class Mode(str, Enum):
    EXP1 = 'exp1'
    EXP2 = 'exp2'


@dataclass(frozen=True)
class ExperimentConfig:
    pointer: PointerConfig = field(default_factory=PointerConfig)
    noise: NoiseModel = field(default_factory=NoiseModel)
    geometry: DetectorGeometry = field(default_factory=DetectorGeometry)
    frames: int = 100
    mode: Mode = Mode.EXP2
    calibration: Optional[dict] = None
    calibration_frames: Optional[int] = None
    workers: int = 4

    def __post_init__(self):
        if self.frames < 1:
            raise ConfigError(f"experiment.frames must be >= 1, got {self.frames}")
        if self.workers < 1:
            raise ConfigError(f"experiment.workers must be >= 1, got {self.workers}")
        if self.calibration is not None:
            missing = [o.value for o in self.required_outcomes if o not in self.calibration]
            if missing:
                raise ConfigError(f"Calibration constants missing for outcome(s) {', '.join(missing)}")

    @property
    def required_outcomes(self) -> tuple:
        """exp1 needs D constants only"""
        return (Outcome.D,) if self.mode is Mode.EXP1 else (Outcome.D, Outcome.A)

    @classmethod
    def from_config(cls, store: SimulatorConfig, calibration: Optional[dict] = None) -> 'ExperimentConfig':
        """Build typed parameter sets from the key/value store"""
        pointer = PointerConfig(
            sigma=store.number('pointer.sigma'),
            delta=store.number('pointer.delta'),
            grid_n=store.number('pointer.grid_n', int),
            grid_span=None if store.get('pointer.grid_span') is None else store.number('pointer.grid_span'),
        )
        noise = NoiseModel(
            photon_budget=store.number('noise.photon_budget'),
            read_noise_std=store.number('noise.read_noise_std'),
            background_offset=store.number('noise.background_offset'),
            seed=store.number('noise.seed', int),
            shot_noise=store.flag('noise.shot_noise'),
        )
        geometry = DetectorGeometry(
            roi_width=store.number('detector.roi_width', int),
            roi_height=store.number('detector.roi_height', int),
            frame_width=store.number('detector.frame_width', int),
            frame_height=store.number('detector.frame_height', int),
            y_width=store.number('detector.y_width'),
            a_offset_px=store.number('detector.a_offset_px'),
        )
        mode = store.get('experiment.mode')
        try:
            mode = Mode(mode)
        except ValueError as e:
            raise ConfigError(f"experiment.mode must be exp1 or exp2, got {mode!r}") from e
        calibration_frames = store.get('calibration.frames')
        return cls(
            pointer=pointer,
            noise=noise,
            geometry=geometry,
            frames=store.number('experiment.frames', int),
            mode=mode,
            calibration=calibration,
            calibration_frames=None if calibration_frames is None else store.number('calibration.frames', int),
            workers=store.number('experiment.workers', int),
        )


@dataclass(frozen=True)
class Metrics:
    fidelity: float
    trace_distance: float
    hermiticity_deviation: float

    def to_dict(self) -> dict:
        return {
            'fidelity': self.fidelity,
            'trace_distance': self.trace_distance,
            'hermiticity_deviation': self.hermiticity_deviation,
        }


@dataclass(frozen=True, eq=False)
class Exp1Result:
    weak_value: complex
    weak_value_error: complex
    true_weak_value: complex
    ket: ReconstructedKet
    fidelity_to_truth: float
    centroid_x: CentroidEstimate
    centroid_p: CentroidEstimate

    def to_dict(self) -> dict:
        return {
            'mode': Mode.EXP1.value,
            'weak_value': [self.weak_value.real, self.weak_value.imag],
            'weak_value_error': [self.weak_value_error.real, self.weak_value_error.imag],
            'true_weak_value': [self.true_weak_value.real, self.true_weak_value.imag],
            'reconstruction': self.ket.to_dict(),
            'fidelity_to_truth': self.fidelity_to_truth,
            'centroid_x': self.centroid_x.to_dict(),
            'centroid_p': self.centroid_p.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class ColumnReport:
    """Per post-selection outcome bookkeeping of an exp2 run"""
    outcome: Outcome
    probability: float
    weak_values: tuple
    weak_value_errors: tuple
    completeness_residual: complex
    completeness_error: complex
    low_signal: bool

    def to_dict(self) -> dict:
        return {
            'outcome': self.outcome.value,
            'probability': self.probability,
            'w_H': _pair(self.weak_values[0]),
            'w_V': _pair(self.weak_values[1]),
            'w_H_error': _pair(self.weak_value_errors[0]),
            'w_V_error': _pair(self.weak_value_errors[1]),
            'completeness_residual': _pair(self.completeness_residual),
            'completeness_error': _pair(self.completeness_error),
            'low_signal': self.low_signal,
        }


@dataclass(frozen=True, eq=False)
class TomographyResult:
    rho: RawMatrixEstimate
    stokes: StokesVector
    metrics: Metrics

    def to_dict(self) -> dict:
        return {
            'rho': self.rho.to_dict(),
            'stokes': self.stokes.to_dict(),
            'metrics': self.metrics.to_dict(),
        }


@dataclass(frozen=True, eq=False)
class Exp2Result:
    dirac: DiracDistribution
    rho: RawMatrixEstimate
    p_D: float
    p_A: float
    stokes: StokesVector
    metrics: Metrics
    columns: tuple
    baseline: Optional[TomographyResult] = None

    @property
    def low_signal_columns(self) -> list:
        return [c.outcome for c in self.columns if c.low_signal]

    def to_dict(self) -> dict:
        data = {
            'mode': Mode.EXP2.value,
            'dirac': self.dirac.to_dict(),
            'rho': self.rho.to_dict(),
            'p_D': self.p_D,
            'p_A': self.p_A,
            'stokes': self.stokes.to_dict(),
            'metrics': self.metrics.to_dict(),
            'columns': [c.to_dict() for c in self.columns],
        }
        if self.baseline is not None:
            data['baseline'] = self.baseline.to_dict()
        return data


@dataclass(frozen=True)
class SweepRow:
    """One prepared state of a waveplate sweep; measured fields are nan on divergent rows"""
    index: int
    hwp: float
    qwp: Optional[float]
    p_D: float
    w_true: complex
    w_measured: complex
    w_error: complex
    alpha_true: complex
    beta_true: complex
    alpha: complex
    beta: complex
    stokes_true: StokesVector
    stokes_measured: StokesVector
    fidelity: float
    divergent: bool
    near_orthogonal: bool

    HEADER = (
        'index', 'hwp_deg', 'qwp_deg', 'p_D',
        'w_true_re', 'w_true_im', 'w_re', 'w_im', 'w_err_re', 'w_err_im',
        'alpha_true_re', 'alpha_true_im', 'beta_true_re', 'beta_true_im',
        'alpha_re', 'alpha_im', 'beta_re', 'beta_im',
        'sx_true', 'sy_true', 'sz_true', 'sx', 'sy', 'sz',
        'fidelity', 'divergent', 'near_orthogonal',
    )

    def as_row(self) -> list:
        return [
            self.index, self.hwp, '' if self.qwp is None else self.qwp, self.p_D,
            self.w_true.real, self.w_true.imag, self.w_measured.real, self.w_measured.imag,
            self.w_error.real, self.w_error.imag,
            self.alpha_true.real, self.alpha_true.imag, self.beta_true.real, self.beta_true.imag,
            self.alpha.real, self.alpha.imag, self.beta.real, self.beta.imag,
            *self.stokes_true.as_tuple(), *self.stokes_measured.as_tuple(),
            self.fidelity, int(self.divergent), int(self.near_orthogonal),
        ]

    @property
    def flagged(self) -> bool:
        return self.divergent or self.near_orthogonal
