"""
Calibration models
"""
from dataclasses import dataclass, asdict
from enum import Enum

from ..errors import DegenerateDesignError


class Outcome(str, Enum):
    D = 'D'
    A = 'A'

    @property
    def index(self) -> int:
        return 0 if self is Outcome.D else 1


@dataclass(frozen=True)
class CalibrationConstants:
    """Re w = a x - b, Im w = c p - d for one post-selection outcome"""
    a: float
    b: float
    c: float
    d: float
    outcome: Outcome = Outcome.D
    residual_rms: float = 0.0

    def __post_init__(self):
        if self.a == 0 or self.c == 0:
            raise DegenerateDesignError(f"Calibration slope is zero for outcome {self.outcome.value}")

    @classmethod
    def identity(cls, outcome: Outcome = Outcome.D) -> 'CalibrationConstants':
        return cls(1.0, 0.0, 1.0, 0.0, outcome)

    def to_dict(self) -> dict:
        data = asdict(self)
        data['outcome'] = self.outcome.value
        return data

    @classmethod
    def from_dict(cls, data: dict) -> 'CalibrationConstants':
        return cls(
            a=float(data['a']),
            b=float(data['b']),
            c=float(data['c']),
            d=float(data['d']),
            outcome=Outcome(data.get('outcome', 'D')),
            residual_rms=float(data.get('residual_rms', 0.0)),
        )


@dataclass(frozen=True)
class CalibrationRecord:
    known_weak_value: complex
    measured_x: float
    measured_p: float
