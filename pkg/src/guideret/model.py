"""Configuration types, constants and per-mode tables for the on-axis guide."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
from scipy import constants as _const

from . import specfun
from .errors import DomainError

__all__ = [
    "PhysicalConstants",
    "CONSTANTS",
    "Orientation",
    "ModeFamily",
    "EmitterPair",
    "GuideSpec",
    "ModeTable",
    "AmplitudeResult",
    "families_for",
    "cutoff_wavenumbers",
    "build_mode_table",
    "validate_below_cutoff",
    "violated_cutoffs",
]

# relative margin below the lowest cutoff; equality is outside the regime
CUTOFF_MARGIN = 1e-9


@dataclass(frozen=True)
class PhysicalConstants:
    """CODATA values in SI units (via :mod:`scipy.constants`)."""

    c: float = _const.c
    eps0: float = _const.epsilon_0
    hbar: float = _const.hbar


CONSTANTS = PhysicalConstants()


class Orientation(str, enum.Enum):
    AXIAL = "axial"
    RADIAL = "radial"
    AZIMUTHAL = "azimuthal"


class ModeFamily(str, enum.Enum):
    TM0 = "TM0"
    TE1 = "TE1"
    TM1 = "TM1"


# (Bessel order, zero kind) seeding each family's radial wavenumbers
_FAMILY_ROOTS = {
    ModeFamily.TM0: (0, specfun.ZeroKind.FUNCTION),
    ModeFamily.TE1: (1, specfun.ZeroKind.DERIVATIVE),
    ModeFamily.TM1: (1, specfun.ZeroKind.FUNCTION),
}


def families_for(orientation):
    """Mode families that couple on-axis dipoles of the given orientation."""
    if Orientation(orientation) is Orientation.AXIAL:
        return (ModeFamily.TM0,)
    return (ModeFamily.TE1, ModeFamily.TM1)


def _positive(name, value):
    value = float(value)
    if not math.isfinite(value) or value <= 0:
        raise DomainError(f"{name} must be positive and finite, got {value!r}")
    return value


@dataclass(frozen=True)
class EmitterPair:
    """Two identical two-level emitters on the guide axis.

    Parameters
    ----------
    lambda0 : float
        Transition wavelength in metres.
    z : float
        Axial separation in metres.
    d_a, d_b : float
        Dipole matrix-element magnitudes in C m. Signed values are accepted;
        the parallel configuration has ``d_a * d_b > 0``.
    orientation : Orientation or str
        Shared dipole direction.
    """

    lambda0: float
    z: float
    d_a: float = 1e-30
    d_b: float = 1e-30
    orientation: Orientation = Orientation.AXIAL
    k0: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "lambda0", _positive("lambda0", self.lambda0))
        object.__setattr__(self, "z", _positive("z", self.z))
        for name in ("d_a", "d_b"):
            v = float(getattr(self, name))
            if not math.isfinite(v):
                raise DomainError(f"{name} must be finite, got {v!r}")
            object.__setattr__(self, name, v)
        object.__setattr__(self, "orientation", Orientation(self.orientation))
        if "k0" not in self.__dict__:
            object.__setattr__(self, "k0", 2.0 * math.pi / self.lambda0)

    @classmethod
    def from_k0(cls, k0, z, d_a=1e-30, d_b=1e-30, orientation=Orientation.AXIAL):
        """Build a pair from the transition wavenumber, keeping ``k0`` exact."""
        k0 = _positive("k0", k0)
        obj = cls.__new__(cls)
        object.__setattr__(obj, "k0", k0)
        cls.__init__(obj, 2.0 * math.pi / k0, z, d_a, d_b, orientation)
        return obj

    def replace(self, **changes):
        """Copy with some fields changed (``k0`` follows ``lambda0``)."""
        kw = dict(
            lambda0=self.lambda0,
            z=self.z,
            d_a=self.d_a,
            d_b=self.d_b,
            orientation=self.orientation,
        )
        if "k0" in changes:
            k0 = changes.pop("k0")
            kw.update(changes)
            kw.pop("lambda0")
            return EmitterPair.from_k0(k0, **kw)
        kw.update(changes)
        if "lambda0" not in changes:
            kw.pop("lambda0")
            return EmitterPair.from_k0(self.k0, **kw)
        return EmitterPair(**kw)

    @property
    def omega0(self):
        return CONSTANTS.c * self.k0


@dataclass(frozen=True)
class GuideSpec:
    """Perfectly conducting cylinder of radius ``radius`` (metres) and the
    truncation policy for mode sums."""

    radius: float
    max_modes: int = 512
    tail_tol: float = 1e-8

    def __post_init__(self):
        object.__setattr__(self, "radius", _positive("radius", self.radius))
        if int(self.max_modes) != self.max_modes or self.max_modes < 1:
            raise DomainError(f"max_modes must be a positive integer, got {self.max_modes!r}")
        object.__setattr__(self, "max_modes", int(self.max_modes))
        if not 0.0 < self.tail_tol < 1.0:
            raise DomainError(f"tail_tol must lie in (0, 1), got {self.tail_tol!r}")


@dataclass(frozen=True, eq=False)
class ModeTable:
    """Radial wavenumbers (1/m) and on-axis normalisation integrals (m^2)
    for the first ``len(self)`` modes of one family."""

    family: ModeFamily
    radius: float
    roots: np.ndarray
    radial_wavenumbers: np.ndarray
    norm_integrals: np.ndarray

    def __len__(self):
        return len(self.roots)


@dataclass(frozen=True)
class AmplitudeResult:
    """A mode-sum amplitude in joules.

    ``tail_bound`` estimates the magnitude of the discarded remainder and
    ``converged`` is False when the adaptive policy ran into its cap.
    """

    value: float
    modes_used: int
    tail_bound: float
    below_cutoff: bool = True
    converged: bool = True
    orientation: Optional[Orientation] = None
    flags: tuple[str, ...] = ()


def _norm_factor(family, x):
    # dimensionless I / R^2 for one mode at root x
    j = specfun.bessel_j
    if family is ModeFamily.TM0:
        return 0.5 * j(1, x) ** 2
    if family is ModeFamily.TE1:
        return 0.5 * (1.0 - 1.0 / (x * x)) * j(1, x) ** 2
    return 0.25 * (j(0, x) - j(2, x)) ** 2


_NORM_CACHE: dict[ModeFamily, list[float]] = {}


def _dimensionless(family, count):
    order, kind = _FAMILY_ROOTS[family]
    rts = specfun.roots(order, kind, count).roots
    known = _NORM_CACHE.setdefault(family, [])
    while len(known) < count:
        known.append(_norm_factor(family, rts[len(known)]))
    return np.array(rts), np.array(known[:count])


def cutoff_wavenumbers(guide):
    """Lowest TM and TE cutoff wavenumbers ``(p_01 / R, q_11 / R)`` in 1/m."""
    p01 = specfun.roots(0, specfun.ZeroKind.FUNCTION, 1)[0]
    q11 = specfun.roots(1, specfun.ZeroKind.DERIVATIVE, 1)[0]
    return p01 / guide.radius, q11 / guide.radius


def build_mode_table(family, guide, count):
    """Mode table with exactly ``count`` entries for ``family``.

    Normalisation integrals follow the on-axis reduction of the guide Green
    tensor::

        TM0: I = R^2/2 J_1(p_0m)^2
        TE1: I = R^2/2 (1 - 1/q_1m^2) J_1(q_1m)^2
        TM1: I = R^2/4 (J_0(p_1m) - J_2(p_1m))^2
    """
    family = ModeFamily(family)
    if int(count) != count or count < 1:
        raise DomainError(f"count must be a positive integer, got {count!r}")
    r = guide.radius
    rts, factors = _dimensionless(family, int(count))
    return ModeTable(
        family=family,
        radius=r,
        roots=rts,
        radial_wavenumbers=rts / r,
        norm_integrals=factors * (r * r),
    )


def violated_cutoffs(pair, guide):
    """Families whose lowest radial wavenumber is not safely above ``k0``."""
    out = []
    for fam in families_for(pair.orientation):
        order, kind = _FAMILY_ROOTS[fam]
        kmin = specfun.roots(order, kind, 1)[0] / guide.radius
        if not pair.k0 < kmin * (1.0 - CUTOFF_MARGIN):
            out.append(fam)
    return out


def validate_below_cutoff(pair, guide):
    """True iff ``k0`` lies strictly below the lowest cutoff of every family
    coupling to the pair's orientation."""
    return not violated_cutoffs(pair, guide)
