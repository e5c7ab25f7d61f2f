r"""
Mode-sum amplitudes for two emitters on the axis of a perfectly conducting
cylinder, valid when the transition wavenumber lies below every relevant
cutoff.

With :math:`\kappa = \sqrt{\lambda^2 - k_0^2}` the per-mode contributions are

axial (TM0 modes)
    :math:`-\frac{d_A d_B}{2\pi\epsilon_0}\frac{\lambda_m^2}{I_{\lambda 0,m}}
    \frac{e^{-\kappa_m z}}{2\kappa_m}`

radial / azimuthal (TE1 and TM1 modes)
    :math:`\frac{d_A d_B}{8\pi\epsilon_0}\left(
    -\frac{k_0^2 e^{-\kappa_{\mu,m} z}}{I_{\mu 1,m}\kappa_{\mu,m}}
    + \frac{\kappa_{\lambda,m} e^{-\kappa_{\lambda,m} z}}{I_{\lambda 1,m}}\right)`

The axial sign follows from the frequency integral, whose denominator
:math:`k_0^2 - \lambda^2 - k_\lambda^2` is negative definite; it makes the
axial amplitude tend to the free-space value :math:`-2 d_A d_B/(4\pi\epsilon_0
z^3)` for :math:`z \ll R`.
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import CutoffError, DomainError
from .model import (
    CONSTANTS,
    AmplitudeResult,
    ModeFamily,
    Orientation,
    build_mode_table,
    violated_cutoffs,
)

__all__ = [
    "SeriesPolicy",
    "Parity",
    "axial_terms",
    "radial_terms",
    "tail_bound",
    "m_axial",
    "m_radial",
    "m_azimuthal",
    "amplitude",
    "resonance_energy",
]

# kappa * R below this is treated as sitting on the branch point
NEAR_CUTOFF = 1e-6
# e^{-pi z/R} above this marks a slowly converging sum
SLOW_RATIO = 0.5
_FIRST_CHUNK = 32


class Parity(str, enum.Enum):
    SYMMETRIC = "symmetric"
    ANTISYMMETRIC = "antisymmetric"


@dataclass(frozen=True)
class SeriesPolicy:
    """How many modes to sum.

    ``fixed`` sums exactly ``n_terms`` modes. ``adaptive`` stops at the first
    mode count whose geometric tail estimate drops below
    ``tail_tol * |partial sum|``, never summing more than ``hard_cap``.
    """

    kind: str = "adaptive"
    n_terms: Optional[int] = None
    tail_tol: float = 1e-8
    hard_cap: int = 512

    def __post_init__(self):
        if self.kind not in ("fixed", "adaptive"):
            raise DomainError(f"unknown policy kind {self.kind!r}")
        if self.hard_cap < 1:
            raise DomainError("hard_cap must be at least 1")
        if self.kind == "fixed":
            if self.n_terms is None or self.n_terms < 1:
                raise DomainError("fixed policy needs n_terms >= 1")
            if self.hard_cap < self.n_terms:
                object.__setattr__(self, "hard_cap", int(self.n_terms))
        elif not 0.0 < self.tail_tol < 1.0:
            raise DomainError(f"tail_tol must lie in (0, 1), got {self.tail_tol!r}")

    @classmethod
    def fixed(cls, n):
        return cls(kind="fixed", n_terms=int(n), hard_cap=int(n))

    @classmethod
    def adaptive(cls, tail_tol=1e-8, hard_cap=512):
        return cls(kind="adaptive", tail_tol=float(tail_tol), hard_cap=int(hard_cap))

    @classmethod
    def for_guide(cls, guide):
        return cls.adaptive(guide.tail_tol, guide.max_modes)


def tail_bound(last_term, z, R, ratio=None):
    """Geometric estimate ``|last_term| * r / (1 - r)`` of a mode-sum remainder.

    ``r`` is ``exp(-pi z / R)``, the asymptotic ratio of successive terms
    (root spacing tends to pi). When ``ratio`` is given, the larger of the
    two is used; mode prefactors grow like a power of the root, so the
    observed ratio of the last two terms is the safer choice early in a sum.
    """
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    if not R > 0:
        raise DomainError(f"R must be positive, got {R!r}")
    r = math.exp(-math.pi * z / R)
    if ratio is not None and ratio > r:
        r = ratio
    if r >= 1.0:
        return math.inf
    return abs(last_term) * r / (1.0 - r)


def _check_pair(pair, guide, orientations):
    if pair.orientation not in orientations:
        raise DomainError(
            f"orientation {pair.orientation.value!r} not handled here"
            f" (expected {', '.join(o.value for o in orientations)})"
        )
    if not pair.z > 0:
        raise DomainError(f"z must be positive, got {pair.z!r}")
    bad = violated_cutoffs(pair, guide)
    if bad:
        fam = bad[0]
        raise CutoffError(
            f"k0 = {pair.k0:.6g} 1/m is not below the {fam.value} cutoff"
            f" of a guide with R = {guide.radius:.6g} m",
            family=fam,
        )


def _decay_rates(table, k0, guide):
    lam = table.radial_wavenumbers
    kappa = np.sqrt((lam - k0) * (lam + k0))
    if kappa[0] * guide.radius < NEAR_CUTOFF:
        raise CutoffError(
            f"k0 sits on the {table.family.value} branch point", family=table.family
        )
    return kappa


def axial_terms(pair, guide, count):
    """Per-mode TM0 contributions (J) to the axial amplitude."""
    tab = build_mode_table(ModeFamily.TM0, guide, count)
    kappa = _decay_rates(tab, pair.k0, guide)
    lam = tab.radial_wavenumbers
    pref = pair.d_a * pair.d_b / (2.0 * math.pi * CONSTANTS.eps0)
    return -pref * (lam * lam / tab.norm_integrals) * np.exp(-kappa * pair.z) / (2.0 * kappa)


def radial_terms(pair, guide, count):
    """Per-mode TE1 and TM1 contributions (J) to the radial amplitude."""
    te = build_mode_table(ModeFamily.TE1, guide, count)
    tm = build_mode_table(ModeFamily.TM1, guide, count)
    k0 = pair.k0
    kmu = _decay_rates(te, k0, guide)
    klam = _decay_rates(tm, k0, guide)
    pref = pair.d_a * pair.d_b / (8.0 * math.pi * CONSTANTS.eps0)
    te_terms = -pref * k0 * k0 * np.exp(-kmu * pair.z) / (te.norm_integrals * kmu)
    tm_terms = pref * klam * np.exp(-klam * pair.z) / tm.norm_integrals
    return te_terms, tm_terms


def _family_bound(parts, m, z, R):
    # each family decays geometrically at its own rate; mixing families in one
    # ratio can undershoot when the slower family takes over
    total = 0.0
    for p in parts:
        last = abs(p[m - 1])
        prev = abs(p[m - 2]) if m > 1 else 0.0
        ratio = last / prev if prev > 0 else None
        total += tail_bound(last, z, R, ratio)
    return total


def _summed(term_fn, pair, guide, policy):
    """Sum per-mode terms under ``policy``; ``term_fn(count)`` returns an
    array (or tuple of arrays) of per-mode contributions."""
    policy = policy or SeriesPolicy.for_guide(guide)
    cap = min(policy.hard_cap, guide.max_modes)
    z, R = pair.z, guide.radius
    flags = []
    if math.exp(-math.pi * z / R) > SLOW_RATIO:
        flags.append("slow")

    def evaluate(count):
        parts = term_fn(count)
        if not isinstance(parts, tuple):
            parts = (parts,)
        return np.sum(parts, axis=0), parts

    if policy.kind == "fixed":
        n = policy.n_terms
        if n > guide.max_modes:
            raise DomainError(f"fixed({n}) exceeds the guide's max_modes={guide.max_modes}")
        _, parts = evaluate(n)
        value = math.fsum(np.concatenate(parts))
        return AmplitudeResult(
            value, n, _family_bound(parts, n, z, R), orientation=pair.orientation,
            flags=tuple(flags),
        )

    count = min(_FIRST_CHUNK, cap)
    while True:
        total, parts = evaluate(count)
        partial = np.cumsum(total)
        for m in range(2, count + 1):
            bound = _family_bound(parts, m, z, R)
            if bound < policy.tail_tol * abs(partial[m - 1]) or (
                bound == 0.0 and partial[m - 1] == 0.0
            ):
                value = math.fsum(np.concatenate([p[:m] for p in parts]))
                return AmplitudeResult(
                    value, m, bound, orientation=pair.orientation, flags=tuple(flags)
                )
        if count >= cap:
            break
        count = min(2 * count, cap)
    value = math.fsum(np.concatenate(parts))
    flags.append("cap")
    return AmplitudeResult(
        value,
        count,
        _family_bound(parts, count, z, R),
        converged=False,
        orientation=pair.orientation,
        flags=tuple(flags),
    )


def m_axial(pair, guide, policy=None):
    """Energy transfer amplitude (J) for dipoles along the guide axis.

    Raises
    ------
    CutoffError
        If ``k0`` is not below the TM01 cutoff.
    """
    _check_pair(pair, guide, (Orientation.AXIAL,))
    return _summed(lambda n: axial_terms(pair, guide, n), pair, guide, policy)


def m_radial(pair, guide, policy=None):
    """Energy transfer amplitude (J) for parallel radial dipoles."""
    _check_pair(pair, guide, (Orientation.RADIAL,))
    return _summed(lambda n: radial_terms(pair, guide, n), pair, guide, policy)


def m_azimuthal(pair, guide, policy=None):
    """Azimuthal dipoles couple through the same on-axis tensor component as
    radial ones, so the mode sum is identical."""
    _check_pair(pair, guide, (Orientation.AZIMUTHAL,))
    return _summed(lambda n: radial_terms(pair, guide, n), pair, guide, policy)


_DISPATCH = {
    Orientation.AXIAL: m_axial,
    Orientation.RADIAL: m_radial,
    Orientation.AZIMUTHAL: m_azimuthal,
}


def amplitude(pair, guide, policy=None):
    """Amplitude for whatever orientation ``pair`` carries."""
    return _DISPATCH[pair.orientation](pair, guide, policy)


def resonance_energy(pair, guide, policy=None, parity=Parity.SYMMETRIC):
    """Resonance interaction energy of the (anti)symmetric one-excitation
    state: ``+M`` for symmetric, ``-M`` for antisymmetric."""
    parity = Parity(parity)
    res = amplitude(pair, guide, policy)
    if parity is Parity.SYMMETRIC:
        return res
    return AmplitudeResult(
        -res.value,
        res.modes_used,
        res.tail_bound,
        res.below_cutoff,
        res.converged,
        res.orientation,
        res.flags,
    )
