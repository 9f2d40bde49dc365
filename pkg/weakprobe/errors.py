"""
Weakprobe exceptions
"""


class WeakProbeError(Exception):
    """Base class for every error raised by the simulator"""


class InvalidStateError(WeakProbeError):
    """Ket or density matrix violates normalisation, hermiticity or positivity"""


class StateSpecError(WeakProbeError):
    """State spec string could not be parsed"""


class DegenerateInputError(WeakProbeError):
    """Weak values too small to define a wavefunction"""


class NonMUBBasisError(WeakProbeError):
    """Some overlap between the two bases vanishes, the Dirac map cannot be inverted"""


class GridTooCoarseError(WeakProbeError):
    """Momentum grid under-samples the coupling phase"""


class PostselectionVanishesError(WeakProbeError):
    """Post-selection probability is (numerically) zero"""


class ROIOverflowError(WeakProbeError):
    """Pointer profile does not fit inside its region of interest"""


class EmptyROIError(WeakProbeError):
    """Region of interest carries no intensity after background subtraction"""


class NoSignalError(WeakProbeError):
    """Both post-selection outcomes are dark"""


class DegenerateDesignError(WeakProbeError):
    """Calibration records cannot determine a line"""


class InsufficientFramesError(WeakProbeError):
    """Not enough frames to average"""


class ConfigError(WeakProbeError):
    """Configuration file missing, unparsable or invalid"""
