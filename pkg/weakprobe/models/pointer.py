"""
Pointer models
"""
from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from ..errors import ConfigError

MIN_GRID_N = 64
DEFAULT_SPAN_SIGMAS = 16.0


@dataclass(frozen=True)
class PointerConfig:
    """
    Gaussian pointer and coupling parameters

    Args:
        sigma: intensity standard deviation of the pointer in x
        delta: lateral shift of the displaced polarization component
        grid_n: samples per profile
        grid_span: extent of the position grid, 16 sigma when omitted (the momentum grid spans
            grid_span / (2 sigma^2))
    """
    sigma: float = 1.0
    delta: float = 0.1
    grid_n: int = 1024
    grid_span: Optional[float] = None

    def __post_init__(self):
        if not self.sigma > 0:
            raise ConfigError(f"pointer.sigma must be positive, got {self.sigma}")
        if self.grid_span is None:
            object.__setattr__(self, 'grid_span', DEFAULT_SPAN_SIGMAS * self.sigma)
        if self.grid_n < MIN_GRID_N:
            raise ConfigError(f"pointer.grid_n must be >= {MIN_GRID_N}, got {self.grid_n}")
        if self.grid_span < 10 * self.sigma:
            raise ConfigError(f"pointer.grid_span must be >= 10 sigma, got {self.grid_span}")
        if abs(self.delta) >= self.grid_span / 4:
            raise ConfigError(f"|pointer.delta| must be < grid_span/4, got {self.delta}")

    @property
    def momentum_span(self) -> float:
        return self.grid_span / (2 * self.sigma ** 2)

    @property
    def dx(self) -> float:
        return self.grid_span / self.grid_n

    @property
    def dp(self) -> float:
        return self.momentum_span / self.grid_n

    def position_grid(self) -> np.ndarray:
        return -self.grid_span / 2 + (np.arange(self.grid_n) + 0.5) * self.dx

    def momentum_grid(self) -> np.ndarray:
        return -self.momentum_span / 2 + (np.arange(self.grid_n) + 0.5) * self.dp


class Domain(str, Enum):
    POSITION = 'position'
    MOMENTUM = 'momentum'


@dataclass(frozen=True, eq=False)
class PointerProfile:
    """Sampled post-selected intensity on a cell-centred grid"""
    domain: Domain
    coords: np.ndarray
    intensity: np.ndarray
    step: float
    total: float

    @classmethod
    def sampled(cls, domain: Domain, coords: np.ndarray, intensity: np.ndarray, step: float):
        intensity = np.clip(intensity, 0.0, None)
        return cls(domain, coords, intensity, step, float(np.sum(intensity) * step))

    def mean(self) -> float:
        """Grid-integrated centroid"""
        return float(np.sum(self.coords * self.intensity) / np.sum(self.intensity))
