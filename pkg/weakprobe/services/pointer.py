"""
Gaussian pointer physics

The polarization component `shifted` (0 = H, 1 = V) of the probe is displaced by delta in x; the
other component stays put. After post-selection on `outcome` the near-field intensity is

    I(x) = A N(x; delta, s^2) + B N(x; 0, s^2) + 2 Re(C) k N(x; delta/2, s^2)

and the far-field intensity is

    I(p) = N(p; 0, 1/(4 s^2)) [A + B + 2 Re(C exp(-i p delta))]

with k = exp(-delta^2 / (8 s^2)) and A, B, C the shifted/unshifted/cross weights of the
post-selected amplitudes summed over the eigen-branches of rho (hbar = 1).
"""
import logging
from typing import NamedTuple

import numpy as np
from scipy.stats import norm

from ..errors import GridTooCoarseError, PostselectionVanishesError
from ..models.pointer import Domain, PointerConfig, PointerProfile
from ..models.state import Basis, Ket
from ..models.weak import WeakValue
from .qstate import HV, as_density

logger = logging.getLogger(__name__)

VANISHING_PROBABILITY = 1e-12


class BranchWeights(NamedTuple):
    shifted: float
    unshifted: float
    cross: complex

    def probability(self, k: float) -> float:
        return self.shifted + self.unshifted + 2 * self.cross.real * k


class Profiles(NamedTuple):
    position: PointerProfile
    momentum: PointerProfile
    probability: float


def branch_weights(rho, outcome: Ket, shifted: int = 0, basis: Basis = HV) -> BranchWeights:
    """Weights A, B, C of the post-selected shifted/unshifted amplitudes"""
    eigenvalues, vectors = np.linalg.eigh(as_density(rho).m)
    moved = basis[shifted]
    still = basis[1 - shifted]
    alpha = outcome.overlap(moved) * (moved.amps.conj() @ vectors)
    beta = outcome.overlap(still) * (still.amps.conj() @ vectors)
    weights = np.clip(eigenvalues, 0.0, None)
    return BranchWeights(
        shifted=float(np.sum(weights * np.abs(alpha) ** 2)),
        unshifted=float(np.sum(weights * np.abs(beta) ** 2)),
        cross=complex(np.sum(weights * alpha * beta.conj())),
    )


def overlap_factor(sigma: float, delta: float) -> float:
    return float(np.exp(-delta ** 2 / (8 * sigma ** 2)))


def check_grid(cfg: PointerConfig):
    """The exp(-i p delta) fringe needs more than two momentum samples per period"""
    if cfg.dp * abs(cfg.delta) >= np.pi:
        logger.error(f"Momentum step {cfg.dp:.3g} too coarse for delta={cfg.delta}")
        raise GridTooCoarseError(
            f"dp * |delta| = {cfg.dp * abs(cfg.delta):.3g} >= pi; increase pointer.grid_n"
        )


def postselected_profiles(rho, outcome: Ket, cfg: PointerConfig, shifted: int = 0) -> Profiles:
    """
    Exact near-field and far-field intensities after coupling and post-selection

    Args:
        rho: probe state (Ket or DensityMatrix)
        outcome: post-selected polarization
        cfg: pointer parameters and grid
        shifted: index in H/V of the displaced component

    Returns:
        (position profile, momentum profile, post-selection probability)
    """
    check_grid(cfg)
    weights = branch_weights(rho, outcome, shifted)
    sigma, delta = cfg.sigma, cfg.delta
    k = overlap_factor(sigma, delta)

    x = cfg.position_grid()
    intensity_x = (
        weights.shifted * norm.pdf(x, loc=delta, scale=sigma)
        + weights.unshifted * norm.pdf(x, loc=0.0, scale=sigma)
        + 2 * weights.cross.real * k * norm.pdf(x, loc=delta / 2, scale=sigma)
    )

    p = cfg.momentum_grid()
    fringe = weights.shifted + weights.unshifted + 2 * (weights.cross * np.exp(-1j * p * delta)).real
    intensity_p = norm.pdf(p, loc=0.0, scale=1 / (2 * sigma)) * fringe

    return Profiles(
        position=PointerProfile.sampled(Domain.POSITION, x, intensity_x, cfg.dx),
        momentum=PointerProfile.sampled(Domain.MOMENTUM, p, intensity_p, cfg.dp),
        probability=weights.probability(k),
    )


def exact_centroids(rho, outcome: Ket, sigma: float, delta: float, shifted: int = 0) -> tuple:
    """
    Closed-form post-selected pointer means (mean_x, mean_p)

    Raises:
        PostselectionVanishesError: post-selection probability below 1e-12
    """
    weights = branch_weights(rho, outcome, shifted)
    k = overlap_factor(sigma, delta)
    probability = weights.probability(k)
    if probability < VANISHING_PROBABILITY:
        logger.error(f"Post-selection probability {probability:.3g} vanishes, centroids undefined")
        raise PostselectionVanishesError(f"Post-selection probability {probability:.3g} vanishes")
    mean_x = delta * (weights.shifted + weights.cross.real * k) / probability
    mean_p = 2 * weights.cross.imag * delta * k / (4 * sigma ** 2) / probability
    return float(mean_x), float(mean_p)


def weak_approx_centroids(w, sigma: float, delta: float) -> tuple:
    """First-order read-out: (delta Re w, delta Im w / (2 sigma^2))"""
    if isinstance(w, WeakValue):
        if w.divergent:
            logger.error("Weak-limit centroids requested for a divergent weak value")
            raise PostselectionVanishesError("Weak value is divergent")
        w = w.value
    w = complex(w)
    return delta * w.real, delta * w.imag / (2 * sigma ** 2)
