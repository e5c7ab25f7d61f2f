"""Resonance energy transfer between two emitters on the axis of a perfectly
conducting cylindrical waveguide."""
from .errors import ConvergenceError, CutoffError, DomainError, RootFindingError
from .freespace import FreeSpaceAmplitude, Prescription, m_freespace, rate_isotropic
from .guide import (
    Parity,
    SeriesPolicy,
    amplitude,
    m_axial,
    m_azimuthal,
    m_radial,
    resonance_energy,
    tail_bound,
)
from .model import (
    CONSTANTS,
    AmplitudeResult,
    EmitterPair,
    GuideSpec,
    ModeFamily,
    Orientation,
    build_mode_table,
    cutoff_wavenumbers,
    validate_below_cutoff,
)
from .specfun import RootTable, ZeroKind, bessel_j, bessel_j_prime, roots

__version__ = "0.1.0"

__all__ = [
    "AmplitudeResult",
    "CONSTANTS",
    "ConvergenceError",
    "CutoffError",
    "DomainError",
    "EmitterPair",
    "FreeSpaceAmplitude",
    "GuideSpec",
    "ModeFamily",
    "Orientation",
    "Parity",
    "Prescription",
    "RootFindingError",
    "RootTable",
    "SeriesPolicy",
    "ZeroKind",
    "amplitude",
    "bessel_j",
    "bessel_j_prime",
    "build_mode_table",
    "cutoff_wavenumbers",
    "m_axial",
    "m_azimuthal",
    "m_freespace",
    "m_radial",
    "rate_isotropic",
    "resonance_energy",
    "roots",
    "tail_bound",
    "validate_below_cutoff",
]
