"""
Detector Service - synthetic CCD frames and their data reduction
"""
import logging
from dataclasses import replace
from pathlib import Path
from typing import Iterable, Iterator, Mapping, Optional, Sequence

import numpy as np

from ..errors import EmptyROIError, InsufficientFramesError, NoSignalError, ROIOverflowError
from ..models.detector import CentroidEstimate, DetectorFrame, DetectorGeometry, NoiseModel, Roi
from ..models.pointer import PointerProfile

logger = logging.getLogger(__name__)

# 50:50 non-polarising beam splitter between near-field and far-field arms
ARM_SPLIT = 0.5
OVERFLOW_TOLERANCE = 1e-9
PGM_MAXVAL = 65535


class DetectorService:
    """
    Forward model of the camera and the reduction recipe applied to its frames

    Frames are float count arrays. Every frame draws from its own generator seeded with
    (seed, *stream, frame_index), so any frame can be regenerated independently.
    """

    # ------------------------------------------------------------------ forward model

    def bin_profile(self, profile: PointerProfile, roi: Roi) -> np.ndarray:
        """Integrated profile mass per ROI pixel column"""
        mass = profile.intensity * profile.step
        binned, _ = np.histogram(profile.coords, bins=roi.pixel_edges(), weights=mass)
        outside = profile.total - float(np.sum(binned))
        if profile.total > 0 and outside > OVERFLOW_TOLERANCE * profile.total:
            logger.error(f"Profile overflows ROI {roi.label} by {outside / profile.total:.3g}")
            raise ROIOverflowError(
                f"{outside / profile.total:.3g} of the {profile.domain.value} profile falls outside ROI {roi.label}"
            )
        return binned

    def y_weights(self, roi: Roi, y_width: float) -> np.ndarray:
        rows = np.arange(roi.height) - (roi.height - 1) / 2
        weights = np.exp(-rows ** 2 / (2 * y_width ** 2))
        return weights / weights.sum()

    def expected_counts(self, profiles: Mapping[str, PointerProfile], geometry: DetectorGeometry,
                        rois: Sequence[Roi], noise: NoiseModel) -> np.ndarray:
        """Noise-free photon counts of one exposure"""
        counts = np.zeros(geometry.shape)
        for roi in rois:
            profile = profiles.get(roi.label)
            if profile is None:
                continue
            photons = noise.photon_budget * ARM_SPLIT * self.bin_profile(profile, roi)
            counts[roi.slices] += np.outer(self.y_weights(roi, geometry.y_width), photons)
        return counts

    def synthesize_frame(self, profiles: Mapping[str, PointerProfile], geometry: DetectorGeometry,
                         rois: Sequence[Roi], noise: NoiseModel, frame_index: int = 0,
                         stream: tuple = (), expected: Optional[np.ndarray] = None) -> DetectorFrame:
        """
        One exposure: Poisson(photons) + Gaussian read noise + offset, clamped at zero

        Args:
            profiles: pointer profile per ROI label; ROIs without one receive no light
            geometry: frame size and y-profile width
            rois: regions of the frame
            noise: noise parameters
            frame_index: exposure number, folded into the seed
            stream: extra seed words separating independent acquisitions
            expected: precomputed expected counts for the same profiles

        Returns:
            DetectorFrame
        """
        if expected is None:
            expected = self.expected_counts(profiles, geometry, rois, noise)
        rng = np.random.default_rng([noise.seed, *stream, frame_index])
        pixels = rng.poisson(expected).astype(float) if noise.shot_noise else expected.copy()
        if noise.read_noise_std > 0:
            pixels += rng.normal(0.0, noise.read_noise_std, size=pixels.shape)
        pixels += noise.background_offset
        np.clip(pixels, 0.0, None, out=pixels)
        return DetectorFrame(pixels=pixels, rois=tuple(rois), index=frame_index, dark=not profiles)

    def acquire(self, profiles: Mapping[str, PointerProfile], geometry: DetectorGeometry,
                rois: Sequence[Roi], noise: NoiseModel, frames: int,
                stream: tuple = ()) -> Iterator[DetectorFrame]:
        """Stream `frames` exposures of the same light field"""
        expected = self.expected_counts(profiles, geometry, rois, noise)
        light_stream = (*stream, 0)
        for index in range(frames):
            yield self.synthesize_frame(profiles, geometry, rois, noise, index, light_stream, expected=expected)

    def dark_frame(self, geometry: DetectorGeometry, rois: Sequence[Roi], noise: NoiseModel,
                   frames: int = 1, stream: tuple = ()) -> DetectorFrame:
        """Mean of `frames` laser-blocked exposures"""
        dark_stream = (*stream, 1)
        total = np.zeros(geometry.shape)
        for index in range(frames):
            total += self.synthesize_frame({}, geometry, rois, noise, index, dark_stream).pixels
        return DetectorFrame(pixels=total / frames, rois=tuple(rois), dark=True)

    # ------------------------------------------------------------------ reduction

    def reduce_background(self, frame: DetectorFrame) -> DetectorFrame:
        """Subtract the minimum pixel of the exposure"""
        return replace(frame, pixels=frame.pixels - frame.pixels.min())

    def roi_intensity(self, frame: DetectorFrame, roi: Roi, dark: Optional[DetectorFrame] = None) -> float:
        """Summed ROI counts, minus the laser-blocked level when a dark frame is given"""
        total = float(np.sum(frame.sub(roi)))
        if dark is not None:
            total -= float(np.sum(dark.sub(roi)))
        return total

    def centroid_x(self, frame: DetectorFrame, roi: Roi) -> float:
        """<x> = sum x I(x) / sum I(x) over the y-integrated ROI, in ROI pixel indices"""
        profile = frame.sub(roi).sum(axis=0)
        total = float(np.sum(profile))
        if total <= 0:
            raise EmptyROIError(f"ROI {roi.label} carries no intensity")
        return float(np.dot(np.arange(roi.width), profile) / total)

    def estimate_probabilities(self, intensity_d: float, intensity_a: float) -> tuple:
        """(p_D, p_A) = (I_D, I_A) / (I_D + I_A); negative dark-subtracted values count as zero"""
        intensity_d = max(intensity_d, 0.0)
        intensity_a = max(intensity_a, 0.0)
        total = intensity_d + intensity_a
        if total <= 0:
            logger.error("Both post-selection outcomes are dark")
            raise NoSignalError("I_D + I_A <= 0")
        p_d = intensity_d / total
        return p_d, 1.0 - p_d

    def frame_centroids(self, frame: DetectorFrame, rois: Sequence[Roi], skip_empty: bool = False) -> dict:
        """Centroid per ROI label of one background-reduced exposure; empty ROIs left out when skip_empty"""
        reduced = self.reduce_background(frame)
        centroids = {}
        for roi in rois:
            try:
                centroids[roi.label] = self.centroid_x(reduced, roi)
            except EmptyROIError:
                if not skip_empty:
                    raise
                logger.debug(f"Frame {frame.index}: ROI {roi.label} empty")
        return centroids

    def average_centroids(self, frames: Iterable[DetectorFrame], roi: Roi, min_frames: int = 2) -> CentroidEstimate:
        """Mean and standard error of per-frame centroids, background-reduced per exposure"""
        values = [self.frame_centroids(frame, (roi,))[roi.label] for frame in frames]
        if len(values) < min_frames:
            raise InsufficientFramesError(f"{len(values)} frame(s) given, at least {min_frames} needed")
        return CentroidEstimate.from_samples(values)

    # ------------------------------------------------------------------ export

    def export_pgm(self, frame: DetectorFrame, path) -> Path:
        """16-bit binary PGM, big-endian, values rounded and clipped to 65535"""
        path = Path(path)
        height, width = frame.pixels.shape
        data = np.clip(np.rint(frame.pixels), 0, PGM_MAXVAL).astype('>u2')
        with open(path, 'wb') as f:
            f.write(f"P5\n{width} {height}\n{PGM_MAXVAL}\n".encode('ascii'))
            f.write(data.tobytes())
        logger.info(f"Frame {frame.index} written to {path}")
        return path

    def export_csv(self, frame: DetectorFrame, path) -> Path:
        path = Path(path)
        np.savetxt(path, frame.pixels, delimiter=',', fmt='%.6g')
        logger.info(f"Frame {frame.index} written to {path}")
        return path
