"""
Polarization state models
"""
from dataclasses import dataclass
from enum import Enum

import numpy as np

from ..errors import InvalidStateError

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
EIGEN_FLOOR = -1e-10
# |cH| below this counts as zero when fixing the global phase
PHASE_ZERO = 1e-12


def canonical_phase(amps: np.ndarray) -> np.ndarray:
    """Rotate the global phase so cH is real and >= 0 (or cV real > 0 when cH vanishes)"""
    pivot = amps[0] if abs(amps[0]) > PHASE_ZERO else amps[1]
    if abs(pivot) == 0:
        return amps
    return amps * (abs(pivot) / pivot)


@dataclass(frozen=True, eq=False)
class Ket:
    """
    Pure polarization state in the H/V basis

    Use `Ket.of(cH, cV)` to normalise and fix the reporting phase.
    """
    amps: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amps, dtype=complex).reshape(2)
        if not np.all(np.isfinite(amps)):
            raise InvalidStateError(f"Non-finite amplitudes {amps}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1.0) > NORM_TOL:
            raise InvalidStateError(f"Ket norm {norm} differs from 1")
        amps.setflags(write=False)
        object.__setattr__(self, 'amps', amps)

    @classmethod
    def of(cls, cH, cV, normalize: bool = True) -> 'Ket':
        amps = np.array([cH, cV], dtype=complex)
        if normalize:
            norm = np.linalg.norm(amps)
            if norm == 0:
                raise InvalidStateError("Zero vector is not a state")
            amps = amps / norm
        return cls(canonical_phase(amps))

    @property
    def cH(self) -> complex:
        return complex(self.amps[0])

    @property
    def cV(self) -> complex:
        return complex(self.amps[1])

    def overlap(self, other: 'Ket') -> complex:
        """<self|other>"""
        return complex(np.vdot(self.amps, other.amps))

    def to_dict(self) -> dict:
        return {
            'cH': [self.cH.real, self.cH.imag],
            'cV': [self.cV.real, self.cV.imag],
        }

    def __repr__(self):
        return f"Ket(cH={self.cH:.6g}, cV={self.cV:.6g})"


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Physical 2x2 density operator"""
    m: np.ndarray

    def __post_init__(self):
        m = np.asarray(self.m, dtype=complex).reshape(2, 2)
        if not np.all(np.isfinite(m)):
            raise InvalidStateError("Density matrix has non-finite entries")
        if np.max(np.abs(m - m.conj().T)) > HERMITIAN_TOL:
            raise InvalidStateError("Density matrix is not Hermitian")
        trace = np.trace(m)
        if abs(trace - 1.0) > TRACE_TOL:
            raise InvalidStateError(f"Density matrix trace {trace.real:.3g} differs from 1")
        eigenvalues = np.linalg.eigvalsh((m + m.conj().T) / 2)
        if eigenvalues.min() < EIGEN_FLOOR:
            raise InvalidStateError(f"Density matrix has negative eigenvalue {eigenvalues.min():.3g}")
        m.setflags(write=False)
        object.__setattr__(self, 'm', m)

    @property
    def purity(self) -> float:
        return float(np.trace(self.m @ self.m).real)

    def is_pure(self, tol: float = 1e-9) -> bool:
        return self.purity > 1.0 - tol

    def to_dict(self) -> dict:
        return {'re': self.m.real.tolist(), 'im': self.m.imag.tolist()}


@dataclass(frozen=True, eq=False)
class RawMatrixEstimate:
    """Measured matrix estimate, possibly non-Hermitian or non-positive"""
    m: np.ndarray
    hermiticity_deviation: float

    @classmethod
    def of(cls, m) -> 'RawMatrixEstimate':
        m = np.asarray(m, dtype=complex).reshape(2, 2)
        deviation = float(np.linalg.norm((m - m.conj().T) / 2, 'fro'))
        return cls(m=m, hermiticity_deviation=deviation)

    def to_dict(self) -> dict:
        return {
            're': self.m.real.tolist(),
            'im': self.m.imag.tolist(),
            'hermiticity_deviation': self.hermiticity_deviation,
        }


class BasisLabel(str, Enum):
    HV = 'HV'
    DA = 'DA'
    RL = 'RL'


@dataclass(frozen=True, eq=False)
class Basis:
    b0: Ket
    b1: Ket
    label: BasisLabel

    def __post_init__(self):
        if abs(self.b0.overlap(self.b1)) > NORM_TOL:
            raise InvalidStateError(f"Basis {self.label} is not orthogonal")

    @property
    def kets(self) -> tuple:
        return (self.b0, self.b1)

    def __getitem__(self, index: int) -> Ket:
        return self.kets[index]

    def unitary(self) -> np.ndarray:
        """Matrix with the basis kets as columns"""
        return np.column_stack([self.b0.amps, self.b1.amps])


@dataclass(frozen=True)
class StokesVector:
    sx: float
    sy: float
    sz: float

    @property
    def length(self) -> float:
        return float(np.sqrt(self.sx ** 2 + self.sy ** 2 + self.sz ** 2))

    def as_tuple(self) -> tuple:
        return (self.sx, self.sy, self.sz)

    def to_dict(self) -> dict:
        return {'sx': self.sx, 'sy': self.sy, 'sz': self.sz}
