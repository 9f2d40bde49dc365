import numpy as np
import pytest

import weakprobe
from weakprobe.models import DetectorGeometry, ExperimentConfig, Mode, NoiseModel, PointerConfig
from weakprobe.services import qstate

NOISELESS = NoiseModel(photon_budget=1e6, read_noise_std=0.0, background_offset=0.0, shot_noise=False)

# 4 ROIs of 32x16 on a 128x16 frame, pointer 2 px wide
SMALL_GEOMETRY = DetectorGeometry(roi_width=32, roi_height=16, frame_width=128, frame_height=16, y_width=2.0)


def build_config(delta=0.01, frames=1, noise=NOISELESS, geometry=None, mode=Mode.EXP2, **kwargs):
    return ExperimentConfig(
        pointer=PointerConfig(sigma=1.0, delta=delta),
        noise=noise,
        geometry=geometry or DetectorGeometry(),
        frames=frames,
        mode=mode,
        calibration_frames=kwargs.pop('calibration_frames', frames),
        workers=kwargs.pop('workers', 2),
        **kwargs,
    )


@pytest.fixture(scope='session')
def services():
    return weakprobe.load()


@pytest.fixture(scope='session')
def experiment(services):
    """Shared so calibrations are computed once per parameter set"""
    return services.experiment


@pytest.fixture
def make_config():
    return build_config


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def named():
    return qstate.NAMED_STATES
