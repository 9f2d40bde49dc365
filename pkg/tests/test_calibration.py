import json

import numpy as np
import pytest

from weakprobe.errors import ConfigError, DegenerateDesignError
from weakprobe.models import CalibrationConstants, CalibrationRecord, DetectorGeometry, NoiseModel, Outcome
from weakprobe.services import CalibrationService, qstate
from weakprobe.services.calibration_service import near_orthogonal

from .conftest import build_config


@pytest.fixture
def calibration():
    return CalibrationService()


class TestFit:
    def test_exact_line(self, calibration):
        records = [CalibrationRecord(complex(2 * x - 1, 3 * p - 0.5), x, p) for x, p in [(0, 0), (1, 2), (2, 1), (3, 5)]]
        cal = calibration.fit(records)
        assert (cal.a, cal.b, cal.c, cal.d) == pytest.approx((2, 1, 3, 0.5))
        assert cal.residual_rms == pytest.approx(0.0, abs=1e-12)

    def test_apply_inverts_the_training_set(self, calibration):
        records = [CalibrationRecord(complex(0.5 * x + 0.1, -0.2 * p + 2), x, p) for x, p in [(1, 0), (2, 3), (5, 1)]]
        cal = calibration.fit(records, Outcome.A)
        assert cal.outcome is Outcome.A
        for r in records:
            assert calibration.apply(cal, r.measured_x, r.measured_p) == pytest.approx(r.known_weak_value, abs=1e-10)

    def test_record_order_does_not_matter(self, calibration, rng):
        records = [
            CalibrationRecord(complex(1.5 * x - 0.2 + rng.normal(0, 0.01), 0.7 * p + 0.1 + rng.normal(0, 0.01)), x, p)
            for x, p in rng.uniform(-3, 3, size=(12, 2))
        ]
        reference = calibration.fit(records)
        shuffled = [records[k] for k in rng.permutation(len(records))]
        cal = calibration.fit(shuffled)
        assert cal.residual_rms > 0
        for name in ('a', 'b', 'c', 'd', 'residual_rms'):
            assert getattr(cal, name) == pytest.approx(getattr(reference, name), rel=1e-12, abs=1e-12)

    def test_uncertainty_propagates_slopes(self):
        cal = CalibrationConstants(-2.0, 0.0, 4.0, 0.0)
        assert CalibrationService().uncertainty(cal, 0.1, 0.01) == pytest.approx(0.2 + 0.04j)

    @pytest.mark.parametrize('points', [
        [(1.0, 2.0)],
        [(1.0, 2.0), (1.0, 3.0)],
        [(1.0, 2.0), (2.0, 2.0)],
    ])
    def test_degenerate_design(self, calibration, points):
        records = [CalibrationRecord(complex(k, k), x, p) for k, (x, p) in enumerate(points)]
        with pytest.raises(DegenerateDesignError):
            calibration.fit(records)


class TestCalibrationStates:
    def test_default_set_excludes_states_near_anti_diagonal(self, calibration):
        states = calibration.default_calibration_states(Outcome.D)
        # hwp 67.5 gives |A>
        assert len(states) == 9
        assert all(not near_orthogonal(k, Outcome.D) for k in states)

    def test_unfiltered_set(self, calibration):
        assert len(calibration.default_calibration_states(None)) == 10

    def test_near_orthogonal(self):
        assert near_orthogonal(qstate.prepare(65.0), Outcome.D)
        assert near_orthogonal(qstate.prepare(70.0), Outcome.D)
        assert not near_orthogonal(qstate.prepare(60.0), Outcome.D)
        assert near_orthogonal(qstate.D, Outcome.A)


class TestPersistence:
    def test_save_and_load(self, calibration, tmp_path):
        constants = [CalibrationConstants(1.5, 0.25, 2.0, -0.5, Outcome.D, 1e-9), CalibrationConstants.identity(Outcome.A)]
        path = calibration.save_constants(constants, tmp_path / 'calibration.json')
        document = json.loads(path.read_text())
        assert document['schema_version'] == '1'
        loaded = calibration.load_constants(path)
        assert loaded[Outcome.D] == constants[0]
        assert loaded[Outcome.A] == constants[1]

    def test_missing_file(self, calibration, tmp_path):
        with pytest.raises(ConfigError):
            calibration.load_constants(tmp_path / 'absent.json')

    def test_malformed_file(self, calibration, tmp_path):
        path = tmp_path / 'calibration.json'
        path.write_text('{"constants": [{"a": 1}]}')
        with pytest.raises(ConfigError):
            calibration.load_constants(path)


class TestApparatusCalibration:
    def test_noiseless_default_set_is_linear(self, experiment):
        constants = experiment.calibrate(build_config(delta=1e-5))
        for cal in constants.values():
            assert cal.residual_rms <= 1e-8

    def test_recovers_pixel_scale(self, experiment):
        delta = 1e-4
        constants = experiment.calibrate(build_config(delta=delta))
        pitch = 16.0 / 128
        for cal in constants.values():
            assert cal.a == pytest.approx(pitch / delta, rel=1e-6)
            assert cal.c == pytest.approx(pitch / delta, rel=1e-6)
            assert cal.b == pytest.approx(63.5 * cal.a, rel=1e-6)

    def test_held_out_right_circular(self, experiment, calibration):
        cfg = build_config(delta=0.01)
        states = [qstate.prepare(11.25 * k) for k in range(8)] + [qstate.L]
        constants = experiment.calibrate(cfg, states)
        acquisition = experiment._acquire(qstate.R, cfg, (Outcome.D,), 0, (9,), 1)
        w = calibration.apply(constants[Outcome.D], acquisition.centroids['NF-D'].mean, acquisition.centroids['FF-D'].mean)
        assert w == pytest.approx(0.5 - 0.5j, abs=1e-3)

    def test_constants_are_outcome_specific(self, experiment, calibration):
        cfg = build_config(delta=0.01, geometry=DetectorGeometry(a_offset_px=3.0))
        constants = experiment.calibrate(cfg)
        acquisition = experiment._acquire(qstate.L, cfg, (Outcome.A,), 0, (9,), 1)
        x, p = acquisition.centroids['NF-A'].mean, acquisition.centroids['FF-A'].mean
        assert calibration.apply(constants[Outcome.A], x, p) == pytest.approx(0.5 - 0.5j, abs=1e-3)
        assert abs(calibration.apply(constants[Outcome.D], x, p) - (0.5 - 0.5j)) > 1.0

    @pytest.mark.slow
    def test_noisy_constants_close_to_noiseless(self, experiment):
        clean = experiment.calibrate(build_config(delta=0.1))
        noisy = experiment.calibrate(build_config(delta=0.1, frames=100, noise=NoiseModel(photon_budget=1e6, seed=5)))
        for outcome, cal in noisy.items():
            assert cal.residual_rms > 0
            reference = clean[outcome]
            assert cal.a == pytest.approx(reference.a, rel=0.05)
            assert cal.c == pytest.approx(reference.c, rel=0.05)
            assert np.isfinite(cal.b) and np.isfinite(cal.d)
