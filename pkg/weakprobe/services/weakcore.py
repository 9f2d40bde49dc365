"""
Weak values, Dirac distributions and their inversion

Rows of a Dirac distribution index the weakly measured basis (H/V by default), columns the
post-selection basis (D/A by default).
"""
import logging

import numpy as np

from ..errors import DegenerateInputError, NonMUBBasisError
from ..models.state import Basis, DensityMatrix, Ket, RawMatrixEstimate
from ..models.weak import DiracDistribution, ReconstructedKet, WeakValue
from .qstate import DA, HV, as_density

logger = logging.getLogger(__name__)

DIVERGENCE_THRESHOLD = 1e-12
DEGENERATE_NORM = 1e-20
MUB_TOL = 1e-10


def weak_value(rho, i: int, j: int, basis_a: Basis = HV, basis_b: Basis = DA) -> WeakValue:
    """<b_j|pi_{a_i} rho|b_j> / <b_j|rho|b_j>, flagged divergent when the denominator vanishes"""
    m = as_density(rho).m
    a = basis_a[i].amps
    b = basis_b[j].amps
    probability = float(np.vdot(b, m @ b).real)
    if probability < DIVERGENCE_THRESHOLD:
        logger.debug(f"Weak value ({i},{j}) divergent: post-selection probability {probability:.3g}")
        return WeakValue(complex('nan'), i, j, probability, divergent=True)
    numerator = np.vdot(b, a) * np.vdot(a, m @ b)
    return WeakValue(complex(numerator / probability), i, j, probability)


def weak_value_pure(psi: Ket, i: int, j: int, basis_a: Basis = HV, basis_b: Basis = DA) -> WeakValue:
    """<b_j|a_i><a_i|psi> / <b_j|psi>"""
    a = basis_a[i]
    b = basis_b[j]
    amplitude = b.overlap(psi)
    probability = abs(amplitude) ** 2
    if probability < DIVERGENCE_THRESHOLD:
        return WeakValue(complex('nan'), i, j, probability, divergent=True)
    return WeakValue(b.overlap(a) * a.overlap(psi) / amplitude, i, j, probability)


def ket_from_weak_values(wH: complex, wV: complex) -> ReconstructedKet:
    """Normalise (wH, wV) with a real positive constant"""
    amps = np.array([wH, wV], dtype=complex)
    norm_sq = float(np.vdot(amps, amps).real)
    if not norm_sq >= DEGENERATE_NORM:
        logger.error(f"Weak values ({wH}, {wV}) too small to define a state")
        raise DegenerateInputError(f"|wH|^2 + |wV|^2 = {norm_sq:.3g} is below {DEGENERATE_NORM}")
    nu = 1.0 / np.sqrt(norm_sq)
    amplitudes = nu * amps
    return ReconstructedKet(ket=Ket.of(*amplitudes), nu=float(nu), amplitudes=amplitudes)


def ket_from_single_weak_value(wH: complex) -> ReconstructedKet:
    """Qubit wavefunction from w_H alone, using pi_H + pi_V = 1 under |D> post-selection"""
    return ket_from_weak_values(wH, 1 - wH)


def _overlaps(basis_a: Basis, basis_b: Basis) -> np.ndarray:
    """O[i, j] = <b_j|a_i>"""
    return (basis_b.unitary().conj().T @ basis_a.unitary()).T


def dirac_from_rho(rho, basis_a: Basis = HV, basis_b: Basis = DA) -> DiracDistribution:
    """S[i, j] = <b_j|a_i><a_i|rho|b_j>"""
    m = as_density(rho).m
    ua = basis_a.unitary()
    ub = basis_b.unitary()
    s = _overlaps(basis_a, basis_b) * (ua.conj().T @ m @ ub)
    return DiracDistribution(s, basis_a, basis_b)


def rho_from_dirac(s: DiracDistribution) -> RawMatrixEstimate:
    """m = sum_ij S_ij / <b_j|a_i> |a_i><b_j|"""
    overlaps = _overlaps(s.basis_a, s.basis_b)
    if np.min(np.abs(overlaps)) < DIVERGENCE_THRESHOLD:
        logger.error(f"Bases {s.basis_a.label.value}/{s.basis_b.label.value} have a vanishing overlap")
        raise NonMUBBasisError(
            f"Cannot invert Dirac distribution over {s.basis_a.label.value}/{s.basis_b.label.value}"
        )
    m = s.basis_a.unitary() @ (s.s / overlaps) @ s.basis_b.unitary().conj().T
    return RawMatrixEstimate.of(m)


def mub_check(a: Basis, b: Basis) -> bool:
    """True iff every |<a_i|b_j>|^2 is 1/2"""
    return bool(np.all(np.abs(np.abs(_overlaps(a, b)) ** 2 - 0.5) <= MUB_TOL))


def _column_fit(s: DiracDistribution, psi: Ket, j: int) -> tuple:
    coefficients = s.basis_a.unitary().conj().T @ psi.amps
    anchor = s.basis_b[j].overlap(psi)
    if abs(anchor) > DIVERGENCE_THRESHOLD:
        coefficients = coefficients * (abs(anchor) / anchor)
    column = s.s[:, j]
    weight = float(np.sum(np.abs(column) ** 2))
    scale = float(np.sum(column.conj() * coefficients).real / weight) if weight > 0 else 0.0
    residual = float(np.max(np.abs(coefficients - scale * column)))
    return scale, residual


def column_scale(s: DiracDistribution, psi: Ket, j: int) -> float:
    """Least-squares real nu/p_{b_j} relating column j to the amplitudes of psi"""
    return _column_fit(s, psi, j)[0]


def pure_column_check(s: DiracDistribution, psi: Ket, j: int) -> float:
    """
    Residual max_i |c_i - (nu/p_{b_j}) S_ij| after fitting the real factor

    The global phase of psi is fixed so that <b_j|psi> is real and positive, the gauge in
    which the factor is real. Zero for a pure state's own distribution.
    """
    return _column_fit(s, psi, j)[1]
