"""
Qubit state algebra - kets, density matrices, waveplates, Stokes parameters, state metrics

Jones conventions (angles in degrees at every interface):
    HWP(t) = [[cos 2t, sin 2t], [sin 2t, -cos 2t]]
    QWP(t) = R(-t) diag(1, i) R(t),  R(t) = [[cos t, sin t], [-sin t, cos t]]
With them prepare(0, qwp=45) is |L> = ((1+i)|H> + (1-i)|V>)/2 and prepare(22.5, qwp=0) is |R>.
"""
import logging
from typing import Optional, Union

import numpy as np
from scipy.linalg import sqrtm

from ..errors import InvalidStateError
from ..models.state import Basis, BasisLabel, DensityMatrix, Ket, RawMatrixEstimate, StokesVector

logger = logging.getLogger(__name__)

_SQ = 1 / np.sqrt(2)

H = Ket.of(1, 0)
V = Ket.of(0, 1)
D = Ket.of(_SQ, _SQ)
A = Ket.of(_SQ, -_SQ)
L = Ket.of((1 + 1j) / 2, (1 - 1j) / 2)
R = Ket.of((1 - 1j) / 2, (1 + 1j) / 2)

HV = Basis(H, V, BasisLabel.HV)
DA = Basis(D, A, BasisLabel.DA)
RL = Basis(R, L, BasisLabel.RL)

NAMED_STATES = {'H': H, 'V': V, 'D': D, 'A': A, 'R': R, 'L': L}

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)

State = Union[Ket, DensityMatrix]


def named_state(label: str) -> Ket:
    try:
        return NAMED_STATES[label.upper()]
    except KeyError:
        raise InvalidStateError(f"Unknown named state '{label}'") from None


def maximally_mixed() -> DensityMatrix:
    return DensityMatrix(np.eye(2, dtype=complex) / 2)


def _rotation(theta: float) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, s], [-s, c]], dtype=complex)


def hwp_matrix(angle: float) -> np.ndarray:
    """Half-wave plate with fast axis at `angle` degrees"""
    t = 2 * np.deg2rad(angle % 180.0)
    return np.array([[np.cos(t), np.sin(t)], [np.sin(t), -np.cos(t)]], dtype=complex)


def qwp_matrix(angle: float) -> np.ndarray:
    """Quarter-wave plate with fast axis at `angle` degrees"""
    theta = np.deg2rad(angle % 180.0)
    return _rotation(-theta) @ np.diag([1, 1j]) @ _rotation(theta)


def prepare(hwp_angle: float, qwp_angle: Optional[float] = None, qwp_order: str = 'after_hwp') -> Ket:
    """
    Jones image of |H> (the polariser output) under a HWP and an optional QWP

    |D> is an eigenstate of a QWP at 45 deg, so (22.5, 45) stays |D>; circular states come from
    (0, 45) -> |L> and (22.5, 0) -> |R>.

    Args:
        hwp_angle: half-wave plate angle, degrees
        qwp_angle: quarter-wave plate angle, degrees, or None for no QWP
        qwp_order: 'none' ignores the QWP, 'after_hwp' places it after the HWP

    Returns:
        Normalised ket with the reporting phase applied
    """
    if qwp_order not in ('none', 'after_hwp'):
        raise ValueError(f"qwp_order must be 'none' or 'after_hwp', got {qwp_order!r}")
    jones = hwp_matrix(hwp_angle)
    if qwp_angle is not None and qwp_order == 'after_hwp':
        jones = qwp_matrix(qwp_angle) @ jones
    return Ket.of(*(jones @ H.amps))


def density_of(k: Ket) -> DensityMatrix:
    return DensityMatrix(np.outer(k.amps, k.amps.conj()))


def as_density(state: State) -> DensityMatrix:
    return density_of(state) if isinstance(state, Ket) else state


def density_from_matrix(m) -> DensityMatrix:
    """Validate a user-supplied 2x2 matrix as a density operator"""
    try:
        return DensityMatrix(np.asarray(m, dtype=complex))
    except InvalidStateError as e:
        logger.error(f"Rejected density matrix: {e}")
        raise


def random_density_matrix(rng: np.random.Generator, components: int = 2) -> DensityMatrix:
    """Random mixture of `components` Haar-random pure states"""
    weights = rng.dirichlet(np.ones(components))
    m = np.zeros((2, 2), dtype=complex)
    for weight in weights:
        v = rng.normal(size=2) + 1j * rng.normal(size=2)
        v /= np.linalg.norm(v)
        m += weight * np.outer(v, v.conj())
    # exact hermiticity and trace before validation
    m = (m + m.conj().T) / 2
    return DensityMatrix(m / np.trace(m).real)


def random_ket(rng: np.random.Generator) -> Ket:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    return Ket.of(*v)


def projector_expectation(m: np.ndarray, k: Ket) -> float:
    """Re <k|m|k>"""
    return float(np.vdot(k.amps, m @ k.amps).real)


def stokes(rho: Union[DensityMatrix, RawMatrixEstimate]) -> StokesVector:
    """(p_D - p_A, p_R - p_L, p_H - p_V)"""
    m = rho.m
    return StokesVector(
        sx=projector_expectation(m, D) - projector_expectation(m, A),
        sy=projector_expectation(m, R) - projector_expectation(m, L),
        sz=projector_expectation(m, H) - projector_expectation(m, V),
    )


def density_from_stokes(sx: float, sy: float, sz: float) -> RawMatrixEstimate:
    """Linear inversion rho = (I + sx X + sy Y + sz Z) / 2"""
    m = (np.eye(2, dtype=complex) + sx * PAULI_X + sy * PAULI_Y + sz * PAULI_Z) / 2
    return RawMatrixEstimate.of(m)


def fidelity(rho: Union[DensityMatrix, RawMatrixEstimate], target: Ket) -> float:
    """Re <target|m|target>, clipped to the reporting range [0, 1 + 1e-9]"""
    return float(np.clip(projector_expectation(rho.m, target), 0.0, 1.0 + 1e-9))


def state_fidelity(a: DensityMatrix, b: Union[DensityMatrix, RawMatrixEstimate, np.ndarray]) -> float:
    """
    Uhlmann fidelity (Tr sqrt(sqrt(a) b sqrt(a)))^2

    A non-Hermitian estimate is replaced by its Hermitian part.
    """
    mb = b if isinstance(b, np.ndarray) else b.m
    mb = (mb + mb.conj().T) / 2
    root = sqrtm(a.m)
    inner = root @ mb @ root
    eigenvalues = np.linalg.eigvalsh((inner + inner.conj().T) / 2)
    return float(np.sum(np.sqrt(np.clip(eigenvalues, 0.0, None))) ** 2)


def trace_distance(a, b) -> float:
    """Half the sum of singular values of a - b"""
    ma = a if isinstance(a, np.ndarray) else a.m
    mb = b if isinstance(b, np.ndarray) else b.m
    return float(0.5 * np.sum(np.linalg.svd(ma - mb, compute_uv=False)))


def dominant_ket(rho: DensityMatrix) -> Ket:
    """Eigenvector of the largest eigenvalue"""
    _, vectors = np.linalg.eigh(rho.m)
    return Ket.of(*vectors[:, -1])


def rephase_to(k: Ket, reference: Ket) -> np.ndarray:
    """Amplitudes of k in the gauge where <reference|k> is real and positive"""
    overlap = reference.overlap(k)
    if abs(overlap) < 1e-12:
        return k.amps.copy()
    return k.amps * (abs(overlap) / overlap)
