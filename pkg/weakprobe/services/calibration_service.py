"""
Calibration Service - affine map from pixel centroids to weak values
"""
import json
import logging
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from ..errors import ConfigError, DegenerateDesignError
from ..models.calibration import CalibrationConstants, CalibrationRecord, Outcome
from ..models.manifest import SCHEMA_VERSION
from ..models.state import Ket
from .qstate import DA, L, R, prepare

logger = logging.getLogger(__name__)

HWP_STEP_DEG = 11.25
HWP_STEPS = 8
EXCLUSION_DEG = 10.0


class CalibrationService:
    """
    Fits Re w = a x - b and Im w = c p - d by ordinary least squares, one constant set per outcome
    """

    def fit(self, records: Sequence[CalibrationRecord], outcome: Outcome = Outcome.D) -> CalibrationConstants:
        """
        Two independent 1-D line fits

        Args:
            records: known weak values with their measured centroids
            outcome: post-selection outcome the records belong to

        Returns:
            CalibrationConstants with the pooled residual RMS
        """
        records = list(records)
        x = np.array([r.measured_x for r in records], dtype=float)
        p = np.array([r.measured_p for r in records], dtype=float)
        w = np.array([r.known_weak_value for r in records], dtype=complex)
        if len(records) < 2 or np.ptp(x) == 0 or np.ptp(p) == 0:
            logger.error(f"Degenerate calibration design for outcome {outcome.value}: {len(records)} record(s)")
            raise DegenerateDesignError(
                f"Outcome {outcome.value}: need >= 2 records with distinct x and p centroids"
            )
        a, b, res_re = self._line(x, w.real)
        c, d, res_im = self._line(p, w.imag)
        if a == 0 or c == 0:
            logger.error(f"Calibration slope vanished for outcome {outcome.value}")
            raise DegenerateDesignError(
                f"Outcome {outcome.value}: known weak values do not vary with the centroids"
            )
        residual_rms = float(np.sqrt(np.mean(np.concatenate([res_re, res_im]) ** 2)))
        constants = CalibrationConstants(a, b, c, d, outcome, residual_rms)
        logger.info(
            f"Calibrated outcome {outcome.value}: a={a:.6g} b={b:.6g} c={c:.6g} d={d:.6g} "
            f"residual_rms={residual_rms:.3g} ({len(records)} records)"
        )
        return constants

    @staticmethod
    def _line(u: np.ndarray, target: np.ndarray) -> tuple:
        """target = slope * u - intercept"""
        design = np.column_stack([u, -np.ones_like(u)])
        (slope, intercept), *_ = np.linalg.lstsq(design, target, rcond=None)
        residuals = target - (slope * u - intercept)
        return float(slope), float(intercept), residuals

    def apply(self, cal: CalibrationConstants, x: float, p: float) -> complex:
        return complex(cal.a * x - cal.b, cal.c * p - cal.d)

    def uncertainty(self, cal: CalibrationConstants, x_error: float, p_error: float) -> complex:
        """First-order propagation of centroid standard errors through the affine map"""
        return complex(abs(cal.a) * x_error, abs(cal.c) * p_error)

    def default_calibration_states(self, outcome: Optional[Outcome] = Outcome.D) -> list:
        """HWP steps of 11.25 deg plus R and L, minus states within 10 deg of the outcome's orthogonal

        outcome None returns every candidate.
        """
        candidates = [prepare(HWP_STEP_DEG * k) for k in range(HWP_STEPS)] + [R, L]
        if outcome is None:
            return candidates
        return [k for k in candidates if not near_orthogonal(k, outcome)]

    def save_constants(self, constants: Iterable[CalibrationConstants], path) -> Path:
        path = Path(path)
        document = {
            'schema_version': SCHEMA_VERSION,
            'constants': [c.to_dict() for c in constants],
        }
        path.write_text(json.dumps(document, indent=2, sort_keys=True) + '\n', encoding='utf-8')
        logger.info(f"Calibration constants written to {path}")
        return path

    def load_constants(self, path) -> dict:
        """Outcome -> CalibrationConstants from a constants JSON document"""
        path = Path(path)
        try:
            document = json.loads(path.read_text(encoding='utf-8'))
            constants = {}
            for entry in document['constants']:
                cal = CalibrationConstants.from_dict(entry)
                constants[cal.outcome] = cal
        except FileNotFoundError as e:
            logger.error(f"Calibration file not found: {path}")
            raise ConfigError(f"Calibration file not found: {path}") from e
        except (ValueError, KeyError, TypeError) as e:
            logger.error(f"Invalid calibration file {path}: {e}")
            raise ConfigError(f"Invalid calibration file {path}: {e}") from e
        logger.info(f"Loaded calibration for outcome(s) {', '.join(o.value for o in constants)} from {path}")
        return constants


def near_orthogonal(k: Ket, outcome: Outcome, degrees: float = EXCLUSION_DEG) -> bool:
    """Within `degrees` (polarization angle) of the state orthogonal to the outcome"""
    orthogonal = DA[1 - outcome.index]
    return abs(orthogonal.overlap(k)) ** 2 > np.cos(np.deg2rad(degrees)) ** 2
