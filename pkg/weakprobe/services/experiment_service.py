"""
Experiment Service - end-to-end weak measurement runs

Experiment 1 post-selects on |D> only and rebuilds the wavefunction from one weak value.
Experiment 2 images both outcomes for an H-displaced and a V-displaced coupling and assembles
the Dirac distribution, then inverts it to a density matrix.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from typing import NamedTuple, Optional, Sequence

import numpy as np

from ..errors import ConfigError, NoSignalError, PostselectionVanishesError
from ..models.calibration import CalibrationRecord, Outcome
from ..models.detector import FF_A, FF_D, NF_A, NF_D, CentroidEstimate
from ..models.experiment import (
    ColumnReport,
    Exp1Result,
    Exp2Result,
    ExperimentConfig,
    Metrics,
    SweepRow,
    TomographyResult,
)
from ..models.state import DensityMatrix, Ket, StokesVector
from ..models.weak import DiracDistribution
from . import pointer, qstate, weakcore
from .calibration_service import CalibrationService, near_orthogonal
from .detector_service import DetectorService

logger = logging.getLogger(__name__)

STREAM_EXP1 = 1
STREAM_EXP2 = 2
STREAM_CALIBRATION = 3
STREAM_TOMOGRAPHY = 4

LOW_SIGNAL_FRACTION = 1e-9
COMPLETENESS_SIGMAS = 3.0

NEAR_FIELD = {Outcome.D: NF_D, Outcome.A: NF_A}
FAR_FIELD = {Outcome.D: FF_D, Outcome.A: FF_A}
BOTH_OUTCOMES = (Outcome.D, Outcome.A)

_NAN = complex('nan')


class Acquisition(NamedTuple):
    centroids: dict
    intensities: dict


class ExperimentService:
    """
    Orchestrates pointer, detector and calibration into experiment runs
    """

    def __init__(self, detector_service: DetectorService, calibration_service: CalibrationService):
        self.detector_service = detector_service
        self.calibration_service = calibration_service
        self._calibration_cache = {}

    # ------------------------------------------------------------------ acquisition

    def _acquire(self, state, cfg: ExperimentConfig, outcomes: Sequence[Outcome], shifted: int,
                 stream: tuple, frames: int) -> Acquisition:
        """Image the post-selected pointer for each outcome and reduce every frame on the fly"""
        detector = self.detector_service
        rois = cfg.geometry.rois(cfg.pointer)
        profiles = {}
        for outcome in outcomes:
            result = pointer.postselected_profiles(state, qstate.DA[outcome.index], cfg.pointer, shifted)
            profiles[NEAR_FIELD[outcome]] = result.position
            profiles[FAR_FIELD[outcome]] = result.momentum

        lit = [roi for roi in rois if roi.label in profiles]
        near = [roi for roi in lit if roi.label in NEAR_FIELD.values()]
        dark = detector.dark_frame(cfg.geometry, rois, cfg.noise, frames, stream)
        samples = {roi.label: [] for roi in lit}
        intensities = {roi.label: 0.0 for roi in near}

        for frame in detector.acquire(profiles, cfg.geometry, rois, cfg.noise, frames, stream):
            for label, value in detector.frame_centroids(frame, lit, skip_empty=True).items():
                samples[label].append(value)
            for roi in near:
                intensities[roi.label] += detector.roi_intensity(frame, roi, dark)

        centroids = {
            label: CentroidEstimate.from_samples(values) if values else None
            for label, values in samples.items()
        }
        return Acquisition(centroids, {label: total / frames for label, total in intensities.items()})

    # ------------------------------------------------------------------ calibration

    def calibrate(self, cfg: ExperimentConfig, states: Optional[Sequence] = None,
                  outcomes: Sequence[Outcome] = BOTH_OUTCOMES) -> dict:
        """
        Run the apparatus on known states and fit one constant set per outcome

        Args:
            cfg: experiment parameters; calibration_frames (or frames) exposures per state
            states: known states, default the HWP/circular calibration set
            outcomes: outcomes to calibrate

        Returns:
            dict Outcome -> CalibrationConstants
        """
        if states is None:
            states = self.calibration_service.default_calibration_states(None)
        frames = cfg.calibration_frames or cfg.frames
        records = {outcome: [] for outcome in outcomes}
        for index, state in enumerate(states):
            rho = qstate.as_density(state)
            acquisition = self._acquire(rho, cfg, outcomes, 0, (STREAM_CALIBRATION, index), frames)
            for outcome in outcomes:
                if isinstance(state, Ket) and near_orthogonal(state, outcome):
                    continue
                known = weakcore.weak_value(rho, 0, outcome.index)
                x = acquisition.centroids[NEAR_FIELD[outcome]]
                p = acquisition.centroids[FAR_FIELD[outcome]]
                if known.divergent or x is None or p is None:
                    continue
                records[outcome].append(CalibrationRecord(known.value, x.mean, p.mean))
        return {outcome: self.calibration_service.fit(records[outcome], outcome) for outcome in outcomes}

    def _calibration(self, cfg: ExperimentConfig) -> dict:
        if cfg.calibration is not None:
            return cfg.calibration
        key = (cfg.pointer, cfg.noise, cfg.geometry, cfg.calibration_frames or cfg.frames, cfg.required_outcomes)
        if key not in self._calibration_cache:
            logger.info("No calibration constants supplied, calibrating on the default state set")
            self._calibration_cache[key] = self.calibrate(cfg, outcomes=cfg.required_outcomes)
        return self._calibration_cache[key]

    def with_calibration(self, cfg: ExperimentConfig) -> ExperimentConfig:
        """cfg with constants resolved, so parallel workers never calibrate"""
        return replace(cfg, calibration=self._calibration(cfg))

    # ------------------------------------------------------------------ metrics

    @staticmethod
    def truth_fidelity(estimate, truth: DensityMatrix) -> float:
        """Re<psi|m|psi> for a pure truth, Uhlmann fidelity of the Hermitian part otherwise"""
        if truth.is_pure():
            return qstate.fidelity(estimate, qstate.dominant_ket(truth))
        return qstate.state_fidelity(truth, estimate)

    def metrics(self, estimate, truth: DensityMatrix) -> Metrics:
        return Metrics(
            fidelity=self.truth_fidelity(estimate, truth),
            trace_distance=qstate.trace_distance(estimate, truth),
            hermiticity_deviation=estimate.hermiticity_deviation,
        )

    # ------------------------------------------------------------------ experiment 1

    def run_exp1(self, true_state, cfg: ExperimentConfig, stream: tuple = (0,)) -> Exp1Result:
        """
        Wavefunction from the |D>-post-selected weak value of pi_H

        Raises:
            PostselectionVanishesError: the true state is orthogonal to |D>
        """
        rho = qstate.as_density(true_state)
        true_w = weakcore.weak_value(rho, 0, Outcome.D.index)
        if true_w.divergent:
            logger.error(f"Post-selection on |D> vanishes (p={true_w.probability:.3g}), weak value undefined")
            raise PostselectionVanishesError(
                f"Probability of post-selecting |D> is {true_w.probability:.3g}; the weak value diverges"
            )
        constants = self._calibration(cfg)[Outcome.D]
        acquisition = self._acquire(rho, cfg, (Outcome.D,), 0, (STREAM_EXP1, *stream), cfg.frames)
        x = acquisition.centroids[NF_D]
        p = acquisition.centroids[FF_D]
        if x is None or p is None:
            logger.error("No light reached the D-outcome regions")
            raise NoSignalError("D-outcome regions are dark in every frame")

        w = self.calibration_service.apply(constants, x.mean, p.mean)
        error = self.calibration_service.uncertainty(constants, x.std_error, p.std_error)
        reconstructed = weakcore.ket_from_single_weak_value(w)
        fidelity = self.truth_fidelity(qstate.density_of(reconstructed.ket), rho)
        logger.debug(f"exp1: w_H={w:.6g} (true {true_w.value:.6g}) fidelity={fidelity:.6f}")
        return Exp1Result(
            weak_value=w,
            weak_value_error=error,
            true_weak_value=true_w.value,
            ket=reconstructed,
            fidelity_to_truth=fidelity,
            centroid_x=x,
            centroid_p=p,
        )

    # ------------------------------------------------------------------ experiment 2

    def run_exp2(self, true_rho, cfg: ExperimentConfig, stream: tuple = (0,), baseline: bool = False) -> Exp2Result:
        """
        Dirac distribution from both outcomes, each projector measured by its own coupling

        Column j is p_{b_j} times the completeness-projected pair ((w_H + 1 - w_V)/2,
        (w_V + 1 - w_H)/2); the raw w_H + w_V - 1 is reported per column with its standard error.
        """
        rho = qstate.as_density(true_rho)
        constants = self._calibration(cfg)
        acquisitions = [
            self._acquire(rho, cfg, BOTH_OUTCOMES, shifted, (STREAM_EXP2, *stream, shifted), cfg.frames)
            for shifted in (0, 1)
        ]
        intensity = {
            outcome: sum(a.intensities[NEAR_FIELD[outcome]] for a in acquisitions)
            for outcome in BOTH_OUTCOMES
        }
        p = self.detector_service.estimate_probabilities(intensity[Outcome.D], intensity[Outcome.A])
        total = max(intensity[Outcome.D], 0.0) + max(intensity[Outcome.A], 0.0)

        s = np.zeros((2, 2), dtype=complex)
        columns = []
        for outcome in BOTH_OUTCOMES:
            j = outcome.index
            estimates = [(a.centroids[NEAR_FIELD[outcome]], a.centroids[FAR_FIELD[outcome]]) for a in acquisitions]
            low_signal = intensity[outcome] < LOW_SIGNAL_FRACTION * total or any(
                x is None or q is None for x, q in estimates
            )
            if low_signal:
                logger.warning(f"Outcome {outcome.value} below signal threshold, Dirac column set to 0")
                columns.append(ColumnReport(outcome, p[j], (_NAN, _NAN), (_NAN, _NAN), _NAN, _NAN, True))
                continue

            cal = constants[outcome]
            w = [self.calibration_service.apply(cal, x.mean, q.mean) for x, q in estimates]
            e = [self.calibration_service.uncertainty(cal, x.std_error, q.std_error) for x, q in estimates]
            residual = w[0] + w[1] - 1
            residual_error = complex(np.hypot(e[0].real, e[1].real), np.hypot(e[0].imag, e[1].imag))
            if _exceeds(residual, residual_error, COMPLETENESS_SIGMAS):
                logger.warning(
                    f"Outcome {outcome.value}: w_H + w_V - 1 = {residual:.3g} exceeds "
                    f"{COMPLETENESS_SIGMAS:g} standard errors ({residual_error:.3g})"
                )
            s[:, j] = p[j] * np.array([(w[0] + 1 - w[1]) / 2, (w[1] + 1 - w[0]) / 2])
            columns.append(ColumnReport(outcome, p[j], tuple(w), tuple(e), residual, residual_error, False))

        dirac = DiracDistribution(s, qstate.HV, qstate.DA)
        estimate = weakcore.rho_from_dirac(dirac)
        metrics = self.metrics(estimate, rho)
        logger.debug(
            f"exp2: p_D={p[0]:.6f} fidelity={metrics.fidelity:.6f} "
            f"trace_distance={metrics.trace_distance:.3g}"
        )
        return Exp2Result(
            dirac=dirac,
            rho=estimate,
            p_D=p[0],
            p_A=p[1],
            stokes=qstate.stokes(estimate),
            metrics=metrics,
            columns=tuple(columns),
            baseline=self.tomography_baseline(rho, cfg, stream) if baseline else None,
        )

    def run_exp2_repetitions(self, true_rho, cfg: ExperimentConfig, repetitions: int) -> list:
        """Independent Monte-Carlo repetitions, one noise stream each, results in repetition order"""
        cfg = self.with_calibration(cfg)
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            return list(pool.map(lambda rep: self.run_exp2(true_rho, cfg, stream=(rep,)), range(repetitions)))

    # ------------------------------------------------------------------ tomography

    def tomography_baseline(self, true_rho, cfg: ExperimentConfig, stream: tuple = (0,)) -> TomographyResult:
        """
        Projective measurements in the D/A, R/L and H/V bases with linear inversion

        The photon budget matches an exp2 run (two couplings of `frames` exposures), split
        evenly over the three bases.
        """
        rho = qstate.as_density(true_rho)
        per_basis = cfg.noise.photon_budget * cfg.frames * 2 / 3
        rng = np.random.default_rng([cfg.noise.seed, STREAM_TOMOGRAPHY, *stream])
        components = []
        for basis in (qstate.DA, qstate.RL, qstate.HV):
            probabilities = np.clip([qstate.projector_expectation(rho.m, k) for k in basis.kets], 0.0, None)
            expected = per_basis * probabilities
            counts = rng.poisson(expected).astype(float) if cfg.noise.shot_noise else expected
            n = counts.sum()
            components.append(float((counts[0] - counts[1]) / n) if n > 0 else 0.0)
        estimate = qstate.density_from_stokes(*components)
        return TomographyResult(
            rho=estimate,
            stokes=StokesVector(*components),
            metrics=self.metrics(estimate, rho),
        )

    # ------------------------------------------------------------------ sweeps

    def sweep_hwp(self, angles: Sequence[float], qwp: Optional[float], cfg: ExperimentConfig) -> list:
        """
        Experiment-1 measurement at each HWP angle, optionally followed by a fixed QWP

        Rows whose post-selection probability vanishes are flagged divergent and carry no
        measurement; rows within 10 deg of |A> are flagged near_orthogonal.
        """
        angles = list(angles)
        if not angles:
            raise ConfigError("Sweep needs at least one angle")
        cfg = self.with_calibration(cfg)
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            rows = list(pool.map(lambda item: self._sweep_point(item[0], item[1], qwp, cfg), enumerate(angles)))
        flagged = sum(row.flagged for row in rows)
        logger.info(f"Sweep of {len(rows)} points done (qwp={qwp}), {flagged} flagged")
        return rows

    def _sweep_point(self, index: int, hwp: float, qwp: Optional[float], cfg: ExperimentConfig) -> SweepRow:
        ket = qstate.prepare(hwp, qwp)
        true_w = weakcore.weak_value_pure(ket, 0, Outcome.D.index)
        alpha_true, beta_true = qstate.rephase_to(ket, qstate.D)
        stokes_true = qstate.stokes(qstate.density_of(ket))
        close = near_orthogonal(ket, Outcome.D)

        if true_w.divergent:
            logger.warning(f"Sweep point {index} (hwp={hwp:g}) is orthogonal to |D>, not measured")
            nan_stokes = StokesVector(float('nan'), float('nan'), float('nan'))
            return SweepRow(
                index, hwp, qwp, true_w.probability, _NAN, _NAN, _NAN,
                complex(alpha_true), complex(beta_true), _NAN, _NAN,
                stokes_true, nan_stokes, float('nan'), True, close,
            )

        if close:
            logger.warning(f"Sweep point {index} (hwp={hwp:g}) lies within 10 deg of |A>")
        result = self.run_exp1(ket, cfg, stream=(index,))
        alpha, beta = result.ket.amplitudes
        return SweepRow(
            index, hwp, qwp, true_w.probability, true_w.value, result.weak_value, result.weak_value_error,
            complex(alpha_true), complex(beta_true), complex(alpha), complex(beta),
            stokes_true, qstate.stokes(qstate.density_of(result.ket.ket)),
            result.fidelity_to_truth, False, close,
        )


def _exceeds(value: complex, error: complex, sigmas: float) -> bool:
    """True when either part lies beyond `sigmas` nonzero standard errors"""
    return (
        (error.real > 0 and abs(value.real) > sigmas * error.real)
        or (error.imag > 0 and abs(value.imag) > sigmas * error.imag)
    )
