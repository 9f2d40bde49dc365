"""
Detector models
"""
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from ..errors import ConfigError
from .pointer import PointerConfig

NF_D = 'NF-D'
NF_A = 'NF-A'
FF_D = 'FF-D'
FF_A = 'FF-A'
ROI_LABELS = (NF_D, NF_A, FF_D, FF_A)


@dataclass(frozen=True)
class NoiseModel:
    """
    Camera noise: Poisson shot noise, Gaussian read noise and a constant offset

    photon_budget is the expected number of photons reaching the camera per frame.
    """
    photon_budget: float = 1e6
    read_noise_std: float = 0.0
    background_offset: float = 0.0
    seed: int = 1234
    shot_noise: bool = True

    def __post_init__(self):
        if self.photon_budget < 0:
            raise ConfigError(f"noise.photon_budget must be >= 0, got {self.photon_budget}")
        if self.read_noise_std < 0:
            raise ConfigError(f"noise.read_noise_std must be >= 0, got {self.read_noise_std}")
        if self.seed < 0:
            raise ConfigError(f"noise.seed must be >= 0, got {self.seed}")

    @property
    def noiseless(self) -> bool:
        return not self.shot_noise and self.read_noise_std == 0


@dataclass(frozen=True)
class Roi:
    """
    Rectangular region of interest

    pitch is the pointer coordinate per pixel; the pointer origin sits at pixel
    (width - 1) / 2 + center_offset_px.
    """
    label: str
    x0: int
    y0: int
    width: int
    height: int
    pitch: float
    center_offset_px: float = 0.0

    @property
    def slices(self) -> tuple:
        return (slice(self.y0, self.y0 + self.height), slice(self.x0, self.x0 + self.width))

    @property
    def origin_px(self) -> float:
        return (self.width - 1) / 2 + self.center_offset_px

    def pixel_edges(self) -> np.ndarray:
        """Pixel boundaries in pointer coordinates"""
        return (np.arange(self.width + 1) - 0.5 - self.origin_px) * self.pitch

    def overlaps(self, other: 'Roi') -> bool:
        return not (
            self.x0 + self.width <= other.x0 or other.x0 + other.width <= self.x0
            or self.y0 + self.height <= other.y0 or other.y0 + other.height <= self.y0
        )


@dataclass(frozen=True)
class DetectorGeometry:
    """Camera frame with four side-by-side regions: NF-D, NF-A, FF-D, FF-A"""
    roi_width: int = 128
    roi_height: int = 64
    frame_width: int = 512
    frame_height: int = 256
    y_width: float = 8.0
    a_offset_px: float = 0.0

    def __post_init__(self):
        if self.roi_width < 8 or self.roi_height < 1:
            raise ConfigError(f"ROI {self.roi_width}x{self.roi_height} is too small")
        if 4 * self.roi_width > self.frame_width or self.roi_height > self.frame_height:
            raise ConfigError(
                f"Four {self.roi_width}x{self.roi_height} ROIs do not fit a "
                f"{self.frame_width}x{self.frame_height} frame"
            )
        if self.y_width <= 0:
            raise ConfigError(f"detector.y_width must be positive, got {self.y_width}")

    @property
    def shape(self) -> tuple:
        return (self.frame_height, self.frame_width)

    def rois(self, pointer: PointerConfig) -> tuple:
        """Regions sized so a pointer grid exactly fills an ROI"""
        y0 = (self.frame_height - self.roi_height) // 2
        nf_pitch = pointer.grid_span / self.roi_width
        ff_pitch = pointer.momentum_span / self.roi_width
        pitches = {NF_D: nf_pitch, NF_A: nf_pitch, FF_D: ff_pitch, FF_A: ff_pitch}
        offsets = {NF_A: self.a_offset_px, FF_A: self.a_offset_px}
        return tuple(
            Roi(
                label=label,
                x0=k * self.roi_width,
                y0=y0,
                width=self.roi_width,
                height=self.roi_height,
                pitch=pitches[label],
                center_offset_px=offsets.get(label, 0.0),
            )
            for k, label in enumerate(ROI_LABELS)
        )


@dataclass(frozen=True, eq=False)
class DetectorFrame:
    """One exposure; pixels are float counts"""
    pixels: np.ndarray
    rois: tuple
    index: int = 0
    dark: bool = False

    def roi(self, label: str) -> Roi:
        for roi in self.rois:
            if roi.label == label:
                return roi
        raise KeyError(label)

    def sub(self, roi: Roi) -> np.ndarray:
        return self.pixels[roi.slices]


@dataclass(frozen=True)
class CentroidEstimate:
    mean: float
    std_error: float
    frames_used: int

    @classmethod
    def from_samples(cls, values: Iterable[float]) -> 'CentroidEstimate':
        values = np.asarray(list(values), dtype=float)
        n = len(values)
        std_error = float(np.std(values, ddof=1) / np.sqrt(n)) if n > 1 else 0.0
        return cls(float(np.mean(values)), std_error, n)

    def to_dict(self) -> dict:
        return {'mean': self.mean, 'std_error': self.std_error, 'frames_used': self.frames_used}
