"""
Weak value and quasi-probability models
"""
from dataclasses import dataclass

import numpy as np

from .state import Basis, Ket


@dataclass(frozen=True)
class WeakValue:
    """
    Weak value of the projector onto basis_a[projector] post-selected on basis_b[postselection]

    A divergent weak value carries value=nan and the (vanishing) post-selection probability.
    """
    value: complex
    projector: int
    postselection: int
    probability: float
    divergent: bool = False

    def to_dict(self) -> dict:
        return {
            're': None if self.divergent else self.value.real,
            'im': None if self.divergent else self.value.imag,
            'projector': self.projector,
            'postselection': self.postselection,
            'probability': self.probability,
            'divergent': self.divergent,
        }


@dataclass(frozen=True, eq=False)
class DiracDistribution:
    """S[i, j] over rows a_i of basis_a and columns b_j of basis_b"""
    s: np.ndarray
    basis_a: Basis
    basis_b: Basis

    def __post_init__(self):
        s = np.asarray(self.s, dtype=complex).reshape(2, 2)
        object.__setattr__(self, 's', s)

    @property
    def column_sums(self) -> np.ndarray:
        """Post-selection probabilities p_{b_j}"""
        return self.s.sum(axis=0)

    @property
    def row_sums(self) -> np.ndarray:
        """Weak-basis probabilities p_{a_i}"""
        return self.s.sum(axis=1)

    @property
    def total(self) -> complex:
        return complex(self.s.sum())

    def to_dict(self) -> dict:
        return {
            'basis_a': self.basis_a.label.value,
            'basis_b': self.basis_b.label.value,
            're': self.s.real.tolist(),
            'im': self.s.imag.tolist(),
        }


@dataclass(frozen=True, eq=False)
class ReconstructedKet:
    """
    Ket rebuilt from weak values

    `amplitudes` keeps nu*w in the gauge fixed by the post-selection; `ket` is the same state
    with the reporting phase applied.
    """
    ket: Ket
    nu: float
    amplitudes: np.ndarray

    def to_dict(self) -> dict:
        return {
            'ket': self.ket.to_dict(),
            'nu': self.nu,
            'amplitudes': [[a.real, a.imag] for a in self.amplitudes],
        }
