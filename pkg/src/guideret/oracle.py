r"""
Direct quadrature of the per-mode frequency integrals.

Every closed-form mode term reduces, after the change of variable from the
frequency to the axial wavenumber, to a cosine transform

.. math::

    \int_0^\infty \frac{N \cos(k z)}{k_0^2 - \lambda^2 - k^2}\,dk,

with ``N = 1`` (axial TM0), ``N = k0**2`` (radial TE1) and
``N = k0**2 - lambda**2`` (radial TM1). The two radial integrands carry an
extra non-decaying ``-cos(k z)`` piece that integrates to zero for ``z > 0``;
it is removed before quadrature.

The integral is computed without contour methods: the real axis is split at
the zeros of the cosine, each half-period is integrated by Gauss-Legendre,
and the alternating sequence of partial sums is accelerated by repeated
averaging (Euler's transformation). The true value is exponentially small in
``sqrt(lambda**2 - k0**2) * z`` while the segment contributions are not, so
the arithmetic runs at a precision that grows with that product.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import mpmath
import numpy as np

from . import guide as _guide
from .errors import ConvergenceError, DomainError
from .model import CONSTANTS, ModeFamily, Orientation, build_mode_table

__all__ = [
    "QuadResult",
    "QuadratureReport",
    "cosine_mode_integral",
    "integral_axial_mode",
    "integral_radial_te_mode",
    "integral_radial_tm_mode",
    "validate_amplitudes",
]

MAX_SEGMENTS = 600
DPS_CAP = 60
# above this decay product, double precision cannot resolve 1e-10 relative
_FLOAT_LIMIT = 12.0
_MIN_SEGMENTS = 8


@dataclass(frozen=True)
class QuadResult:
    value: float
    error: float
    segments: int
    raw_tail: float
    dps: int


@dataclass(frozen=True)
class QuadratureReport:
    """Closed-form versus quadrature value of one mode term, in joules.

    ``rel_err`` is None for terms below the comparison floor; those are
    judged on ``abs_err`` alone.
    """

    family: ModeFamily
    mode_index: int
    closed_form: float
    quadrature: float
    abs_err: float
    rel_err: Optional[float]
    segments: int
    passed: bool


def _legendre_nodes_float(n):
    x, w = np.polynomial.legendre.leggauss(n)
    return x, w


@lru_cache(maxsize=32)
def _legendre_nodes_mp(n, dps):
    with mpmath.workdps(dps + 10):
        x0, _ = np.polynomial.legendre.leggauss(n)
        eps = mpmath.mpf(10) ** (-(dps + 5))
        xs, ws = [], []
        for guess in x0:
            x = mpmath.mpf(guess)
            for _ in range(50):
                p0, p1 = mpmath.mpf(1), x
                for k in range(2, n + 1):
                    p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
                dp = n * (x * p1 - p0) / (x * x - 1)
                dx = p1 / dp
                x -= dx
                if abs(dx) < eps:
                    break
            p0, p1 = mpmath.mpf(1), x
            for k in range(2, n + 1):
                p0, p1 = p1, ((2 * k - 1) * x * p1 - (k - 1) * p0) / k
            dp = n * (x * p1 - p0) / (x * x - 1)
            xs.append(x)
            ws.append(2 / ((1 - x * x) * dp * dp))
    return tuple(xs), tuple(ws)


def _pieces(decay):
    # keep the pole at t = i*decay at least two half-widths away from each piece
    return max(1, math.ceil(math.pi / max(decay, 1e-300)))


def _working_dps(decay):
    return min(DPS_CAP, 25 + math.ceil(decay / math.log(10.0)))


class _Accelerator:
    """Incremental Euler transform (repeated averaging) of partial sums."""

    def __init__(self, zero):
        self.diag = []
        self.partial = zero
        self.estimates = []

    def push(self, term):
        self.partial = self.partial + term
        new = [self.partial]
        for prev in self.diag:
            new.append((prev + new[-1]) / 2)
        self.diag = new
        est = new[len(new) // 2]
        self.estimates.append(est)
        return est


def _node_layout(n_nodes, pieces, xs, ws, half_pi, cos):
    us, wu = [], []
    width = 2 * half_pi / pieces
    for p in range(pieces):
        centre = -half_pi + width * (p + 0.5)
        for x, w in zip(xs, ws):
            us.append(centre + width / 2 * x)
            wu.append(w * width / 2)
    cw = [w * cos(u) for u, w in zip(us, wu)]
    return us, cw


def cosine_mode_integral(lam, k0, z, numerator=1.0, *, rtol=1e-10, atol=None,
                         max_segments=MAX_SEGMENTS):
    r"""Quadrature of :math:`\int_0^\infty N\cos(kz)/(k_0^2-\lambda^2-k^2)\,dk`.

    Parameters
    ----------
    lam, k0 : float
        Radial and transition wavenumbers in 1/m, ``lam > k0 >= 0``.
    z : float
        Separation in metres.
    numerator : float
        Constant ``N`` multiplying the integrand.
    rtol, atol : float
        Stop once successive accelerated estimates differ by less than
        ``max(rtol * |value|, atol)``. ``atol`` is in the units of the result;
        by default it is set to the working precision relative to
        :math:`\int_0^\infty |N|/(\lambda^2-k_0^2+k^2)\,dk`.

    Returns
    -------
    QuadResult
    """
    lam, k0, z = float(lam), float(k0), float(z)
    if not z > 0:
        raise DomainError(f"z must be positive, got {z!r}")
    if not k0 >= 0:
        raise DomainError(f"k0 must be non-negative, got {k0!r}")
    if not lam > k0:
        raise DomainError(f"radial wavenumber {lam!r} must exceed k0 = {k0!r}")

    # t = k z; result = z * N * int_0^inf cos t / (-(a + t^2)) dt
    decay = math.sqrt((lam * z - k0 * z) * (lam * z + k0 * z))
    scale = abs(z * numerator) * math.pi / (2.0 * max(decay, 1e-300))
    if scale == 0.0:
        return QuadResult(0.0, 0.0, 0, 0.0, 16)
    dps = _working_dps(decay)
    if atol is not None and atol > 0:
        # digits beyond those needed to resolve atol against the scale are wasted
        dps = min(dps, 12 + max(0, math.ceil(math.log10(scale / atol))))
    use_float = decay <= _FLOAT_LIMIT or dps <= 18
    if use_float:
        dps = 16
    if atol is None:
        atol = scale * 10.0 ** (-(dps - 6))
    n_nodes = 12 + dps // 3
    pieces = _pieces(decay)

    if use_float:
        xs, ws = _legendre_nodes_float(n_nodes)
        us, cw = _node_layout(n_nodes, pieces, xs, ws, math.pi / 2, math.cos)
        us = np.asarray(us)
        cw = np.asarray(cw)
        a = (lam * z - k0 * z) * (lam * z + k0 * z)
        pi = math.pi

        def segment(j):
            t = j * pi + us
            s = float(np.dot(cw, 1.0 / (-a - t * t)))
            s = -s if j % 2 else s
            return 0.5 * s if j == 0 else s

        acc = _Accelerator(0.0)
        to_float = float
        ctx = None
    else:
        ctx = mpmath.workdps(dps)
        ctx.__enter__()
        xs, ws = _legendre_nodes_mp(n_nodes, dps)
        pi = mpmath.pi
        us, cw = _node_layout(n_nodes, pieces, xs, ws, pi / 2, mpmath.cos)
        lz = mpmath.mpf(lam) * mpmath.mpf(z)
        kz = mpmath.mpf(k0) * mpmath.mpf(z)
        a = (lz - kz) * (lz + kz)

        def segment(j):
            jp = j * pi
            s = mpmath.fdot(cw, [1 / (-a - (jp + u) ** 2) for u in us])
            s = -s if j % 2 else s
            return s / 2 if j == 0 else s

        acc = _Accelerator(mpmath.mpf(0))
        to_float = float

    try:
        tol_hits = 0
        prev = None
        err = math.inf
        for j in range(max_segments):
            est = acc.push(segment(j))
            if prev is not None:
                diff = abs(to_float(est - prev)) * abs(z * numerator)
                value = to_float(est) * z * numerator
                err = diff
                if j >= _MIN_SEGMENTS and diff <= max(rtol * abs(value), atol):
                    tol_hits += 1
                    if tol_hits >= 2:
                        K = (j + 0.5) * math.pi
                        raw_tail = 2.0 * abs(z * numerator) / (decay * decay + K * K)
                        return QuadResult(value, 2.0 * err, j + 1, raw_tail, dps)
                else:
                    tol_hits = 0
            prev = est
    finally:
        if ctx is not None:
            ctx.__exit__(None, None, None)
    raise ConvergenceError(
        f"cosine integral did not converge in {max_segments} segments"
        f" (lambda={lam:.6g}, k0={k0:.6g}, z={z:.6g}, last change {err:.3e})"
    )


def _unwrap(res, full_output):
    return (res.value, res) if full_output else res.value


def integral_axial_mode(lam, k0, z, *, full_output=False, **kw):
    r""":math:`\int_0^\infty \cos(k_\lambda z)/(k_0^2-\lambda^2-k_\lambda^2)\,
    dk_\lambda` for one TM0 mode (units of metres)."""
    return _unwrap(cosine_mode_integral(lam, k0, z, 1.0, **kw), full_output)


def integral_radial_te_mode(mu, k0, z, *, full_output=False, **kw):
    r"""TE1 integral :math:`\int_0^\infty (k_\mu^2+\mu^2)\cos(k_\mu z)/
    (k_0^2-\mu^2-k_\mu^2)\,dk_\mu` with the ``-cos`` term dropped, leaving
    :math:`k_0^2\int_0^\infty \cos(k_\mu z)/(k_0^2-\mu^2-k_\mu^2)\,dk_\mu`."""
    k0 = float(k0)
    return _unwrap(cosine_mode_integral(mu, k0, z, k0 * k0, **kw), full_output)


def integral_radial_tm_mode(lam, k0, z, *, full_output=False, **kw):
    r"""TM1 integral :math:`\int_0^\infty k_\lambda^2\cos(k_\lambda z)/
    (k_0^2-\lambda^2-k_\lambda^2)\,dk_\lambda` with the ``-cos`` term
    dropped, leaving a factor :math:`k_0^2-\lambda^2` on the cosine
    transform."""
    lam, k0 = float(lam), float(k0)
    numer = (k0 - lam) * (k0 + lam)
    return _unwrap(cosine_mode_integral(lam, k0, z, numer, **kw), full_output)


def _reports(family, closed, prefactors, integrate, floor_abs, floor_ref,
             rel_tol, floor_ratio):
    out = []
    for m, (cf, pref, lam) in enumerate(zip(closed, *prefactors), start=1):
        target = min(0.1 * floor_abs, 1e-3 * rel_tol * floor_ratio * floor_ref)
        atol = target / abs(pref) if pref and target > 0 else None
        try:
            res = integrate(lam, atol=atol, rtol=min(1e-10, rel_tol * 1e-3))
        except ConvergenceError as exc:
            raise ConvergenceError(f"{family.value} mode {m}: {exc}", mode_index=m) from exc
        quad = pref * res.value
        abs_err = abs(cf - quad)
        if abs(cf) > floor_ratio * floor_ref and cf != 0.0:
            rel = abs_err / abs(cf)
            ok = rel < rel_tol
        else:
            rel = None
            ok = abs_err < floor_abs
        out.append(QuadratureReport(family, m, float(cf), float(quad), abs_err, rel,
                                    res.segments, ok))
    return out


def validate_amplitudes(pair, guide, modes, *, rel_tol=1e-6, abs_floor=1e-30,
                        floor_ratio=1e-20):
    """Check every closed-form mode term against direct quadrature.

    The quadrature side is assembled from the frequency-integral prefactors
    (``d_A d_B lambda^2 / (2 pi^2 eps0 I)`` axially, ``d_A d_B / (4 pi^2 eps0
    I)`` radially) and never touches the closed forms. Terms smaller than
    ``floor_ratio`` times the largest term are compared in absolute terms
    against ``abs_floor`` joules.

    Returns
    -------
    list of QuadratureReport
        One entry per mode and family, families in table order.
    """
    if int(modes) != modes or modes < 1:
        raise DomainError(f"modes must be a positive integer, got {modes!r}")
    modes = int(modes)
    k0, z = pair.k0, pair.z
    dd = pair.d_a * pair.d_b
    eps0 = CONSTANTS.eps0

    if pair.orientation is Orientation.AXIAL:
        _guide._check_pair(pair, guide, (Orientation.AXIAL,))
        closed = _guide.axial_terms(pair, guide, modes)
        tab = build_mode_table(ModeFamily.TM0, guide, modes)
        lam = tab.radial_wavenumbers
        pref = dd / (2.0 * math.pi**2 * eps0) * lam * lam / tab.norm_integrals
        ref = float(np.max(np.abs(closed))) if modes else 0.0
        return _reports(
            ModeFamily.TM0, closed, (pref, lam),
            lambda l, **kw: cosine_mode_integral(l, k0, z, 1.0, **kw),
            abs_floor, ref, rel_tol, floor_ratio,
        )

    _guide._check_pair(pair, guide, (Orientation.RADIAL, Orientation.AZIMUTHAL))
    te_closed, tm_closed = _guide.radial_terms(pair, guide, modes)
    te = build_mode_table(ModeFamily.TE1, guide, modes)
    tm = build_mode_table(ModeFamily.TM1, guide, modes)
    base = dd / (4.0 * math.pi**2 * eps0)
    ref = float(max(np.max(np.abs(te_closed)), np.max(np.abs(tm_closed))))

    def te_int(mu, **kw):
        return cosine_mode_integral(mu, k0, z, k0 * k0, **kw)

    def tm_int(lam, **kw):
        return cosine_mode_integral(lam, k0, z, (k0 - lam) * (k0 + lam), **kw)

    reports = _reports(ModeFamily.TE1, te_closed, (base / te.norm_integrals,
                       te.radial_wavenumbers), te_int, abs_floor, ref, rel_tol, floor_ratio)
    reports += _reports(ModeFamily.TM1, tm_closed, (base / tm.norm_integrals,
                        tm.radial_wavenumbers), tm_int, abs_floor, ref, rel_tol, floor_ratio)
    return reports
