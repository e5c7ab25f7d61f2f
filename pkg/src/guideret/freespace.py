r"""
Free-space resonance energy transfer between two dipoles.

.. math::

    M^{(\pm)} = \frac{d_{Ai} d_{Bj}}{4\pi\epsilon_0 r^3}
        \left[(\delta_{ij} - 3\hat r_i \hat r_j)(1 \pm i k_0 r)
        - (\delta_{ij} - \hat r_i \hat r_j) k_0^2 r^2\right] e^{\mp i k_0 r}

The ``plus``/``minus`` prescriptions are complex conjugates of each other.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .model import CONSTANTS, Orientation

__all__ = [
    "Prescription",
    "FreeSpaceAmplitude",
    "orientation_factors",
    "m_freespace",
    "m_freespace_vectors",
    "rate_isotropic",
]


class Prescription(str, enum.Enum):
    PLUS = "plus"
    MINUS = "minus"


@dataclass(frozen=True)
class FreeSpaceAmplitude:
    re: float
    im: float
    prescription: Prescription = Prescription.PLUS

    @property
    def value(self):
        return complex(self.re, self.im)

    def __abs__(self):
        return math.hypot(self.re, self.im)


def orientation_factors(orientation):
    """Diagonal entries of (delta - 3 r r) and (delta - r r) for dipoles
    parallel to each other and aligned with ``orientation``; the separation
    vector is the guide axis."""
    if Orientation(orientation) is Orientation.AXIAL:
        return -2.0, 0.0
    return 1.0, 1.0


def _bracket(near, far, k0r, sign):
    # [near (1 +- i k0 r) - far k0^2 r^2] e^{-+ i k0 r}
    return (near * complex(1.0, sign * k0r) - far * k0r * k0r) * complex(
        math.cos(k0r), -sign * math.sin(k0r)
    )


def m_freespace(pair, prescription=Prescription.PLUS):
    """Free-space amplitude for an :class:`~guideret.model.EmitterPair`
    separated by ``pair.z`` along the axis."""
    prescription = Prescription(prescription)
    r = pair.z
    if not r > 0:
        raise DomainError(f"separation must be positive, got {r!r}")
    sign = 1.0 if prescription is Prescription.PLUS else -1.0
    near, far = orientation_factors(pair.orientation)
    pref = pair.d_a * pair.d_b / (4.0 * math.pi * CONSTANTS.eps0 * r**3)
    val = pref * _bracket(near, far, pair.k0 * r, sign)
    return FreeSpaceAmplitude(val.real, val.imag, prescription)


def m_freespace_vectors(d_a, d_b, r_vec, k0, prescription=Prescription.PLUS):
    """Amplitude for arbitrary dipole vectors.

    ``d_a`` and ``d_b`` may be arrays of shape ``(..., 3)``; the result
    broadcasts over the leading axes. ``r_vec`` is the separation vector.
    """
    sign = 1.0 if Prescription(prescription) is Prescription.PLUS else -1.0
    r_vec = np.asarray(r_vec, dtype=float)
    r = float(np.linalg.norm(r_vec))
    if not r > 0:
        raise DomainError("separation vector must be non-zero")
    rhat = r_vec / r
    d_a = np.asarray(d_a, dtype=float)
    d_b = np.asarray(d_b, dtype=float)
    dot_ab = np.sum(d_a * d_b, axis=-1)
    proj = (d_a @ rhat) * (d_b @ rhat)
    k0r = k0 * r
    phase = np.exp(-1j * sign * k0r)
    bracket = (dot_ab - 3.0 * proj) * (1.0 + 1j * sign * k0r) - (dot_ab - proj) * k0r**2
    return bracket * phase / (4.0 * np.pi * CONSTANTS.eps0 * r**3)


def rate_isotropic(pair):
    r"""Orientation-independent rate expression in J^2:
    :math:`2 d_A^2 d_B^2 (3 + k_0^2 r^2 + k_0^4 r^4) / (4\pi\epsilon_0 r^3)^2`.

    This is the Frobenius norm of the dipole coupling tensor,
    ``sum_ij |T_ij|^2`` times ``d_A^2 d_B^2``; an average over uniformly
    random unit directions of both dipoles is one ninth of it.
    """
    r = pair.z
    if not r > 0:
        raise DomainError(f"separation must be positive, got {r!r}")
    x = pair.k0 * r
    denom = (4.0 * math.pi * CONSTANTS.eps0 * r**3) ** 2
    return 2.0 * pair.d_a**2 * pair.d_b**2 / denom * (3.0 + x * x + x**4)
