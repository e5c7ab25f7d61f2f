"""Grid evaluation of guide and free-space amplitudes, and row serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import freespace, guide
from .errors import CutoffError, DomainError
from .model import EmitterPair, GuideSpec

__all__ = [
    "SweepSpec",
    "SweepRow",
    "FIELDS",
    "RESONANCE_FIELDS",
    "grid",
    "evaluate_point",
    "run_sweep",
    "resonance_rows",
    "format_csv",
    "format_json",
]

FIELDS = (
    "z_m",
    "R_m",
    "orientation",
    "M_guide_J",
    "M_fs_re_J",
    "M_fs_im_J",
    "ratio",
    "modes_used",
    "tail_bound_J",
    "flags",
)
RESONANCE_FIELDS = FIELDS + ("parity", "dE_J", "force_N")


@dataclass(frozen=True)
class SweepSpec:
    variable: str
    min: float
    max: float
    points: int
    spacing: Optional[str] = None

    def __post_init__(self):
        if self.variable not in ("z", "R"):
            raise DomainError(f"sweep variable must be 'z' or 'R', got {self.variable!r}")
        if not 0 < self.min < self.max:
            raise DomainError("sweep bounds must satisfy 0 < min < max")
        if int(self.points) != self.points or self.points < 2:
            raise DomainError("a sweep needs at least 2 points")
        if self.spacing is None:
            object.__setattr__(self, "spacing", "log" if self.variable == "z" else "linear")
        if self.spacing not in ("linear", "log"):
            raise DomainError(f"spacing must be 'linear' or 'log', got {self.spacing!r}")


@dataclass(frozen=True)
class SweepRow:
    z: float
    R: float
    orientation: str
    M_guide: Optional[float]
    M_fs_re: float
    M_fs_im: float
    ratio: Optional[float]
    modes_used: Optional[int]
    tail_bound: Optional[float]
    flags: tuple[str, ...] = ()
    parity: Optional[str] = None
    dE: Optional[float] = None
    force: Optional[float] = None

    def record(self, fields=FIELDS):
        full = {
            "z_m": self.z,
            "R_m": self.R,
            "orientation": self.orientation,
            "M_guide_J": self.M_guide,
            "M_fs_re_J": self.M_fs_re,
            "M_fs_im_J": self.M_fs_im,
            "ratio": self.ratio,
            "modes_used": self.modes_used,
            "tail_bound_J": self.tail_bound,
            "flags": ";".join(self.flags),
            "parity": self.parity,
            "dE_J": self.dE,
            "force_N": self.force,
        }
        return {k: full[k] for k in fields}


def grid(spec):
    """Grid points of ``spec`` in increasing order."""
    if spec.spacing == "log":
        return np.geomspace(spec.min, spec.max, spec.points)
    return np.linspace(spec.min, spec.max, spec.points)


def evaluate_point(pair, guide_spec, policy=None):
    """One :class:`SweepRow`. A cutoff violation yields a row with the guide
    columns empty and a ``cutoff:<family>`` flag instead of an exception."""
    fs = freespace.m_freespace(pair)
    try:
        res = guide.amplitude(pair, guide_spec, policy)
    except CutoffError as exc:
        fam = exc.family.value if exc.family is not None else "unknown"
        return SweepRow(pair.z, guide_spec.radius, pair.orientation.value, None,
                        fs.re, fs.im, None, None, None, (f"cutoff:{fam}",))
    ratio = res.value / fs.re if fs.re != 0.0 else None
    return SweepRow(pair.z, guide_spec.radius, pair.orientation.value, res.value,
                    fs.re, fs.im, ratio, res.modes_used, res.tail_bound, res.flags)


def _points(pair, guide_spec, spec):
    for x in grid(spec):
        x = float(x)
        if spec.variable == "z":
            yield pair.replace(z=x), guide_spec
        else:
            yield pair, GuideSpec(x, guide_spec.max_modes, guide_spec.tail_tol)


def run_sweep(pair, guide_spec, spec, policy=None):
    """Rows for every grid point of ``spec``; the non-swept quantity is taken
    from ``pair`` (z) or ``guide_spec`` (R)."""
    return [evaluate_point(p, g, policy) for p, g in _points(pair, guide_spec, spec)]


def _energy(pair, guide_spec, policy, parity):
    return guide.resonance_energy(pair, guide_spec, policy, parity).value


def resonance_rows(pair, guide_spec, spec=None, policy=None,
                   parity=guide.Parity.SYMMETRIC, force=False):
    """Resonance interaction energy rows; ``force`` adds ``-dE/dz`` by a
    central difference with step ``z * 1e-4``."""
    parity = guide.Parity(parity)
    points = [(pair, guide_spec)] if spec is None else list(_points(pair, guide_spec, spec))
    rows = []
    for p, g in points:
        row = evaluate_point(p, g, policy)
        de = f = None
        if row.M_guide is not None:
            de = _energy(p, g, policy, parity)
            if force:
                h = p.z * 1e-4
                try:
                    up = _energy(p.replace(z=p.z + h), g, policy, parity)
                    down = _energy(p.replace(z=p.z - h), g, policy, parity)
                    f = -(up - down) / (2.0 * h)
                except CutoffError:
                    f = None
        rows.append(SweepRow(row.z, row.R, row.orientation, row.M_guide, row.M_fs_re,
                             row.M_fs_im, row.ratio, row.modes_used, row.tail_bound,
                             row.flags, parity.value, de, f))
    return rows


def _cell(v):
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, float):
        if math.isinf(v):
            return "inf" if v > 0 else "-inf"
        return f"{v:.11e}"
    return str(v)


def format_csv(records, fields):
    """Comma-separated text, LF line endings, 12 significant digits."""
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(fields)
    for rec in records:
        w.writerow([_cell(rec[k]) for k in fields])
    return buf.getvalue()


def _json_value(v):
    if isinstance(v, float):
        if not math.isfinite(v):
            return None
        return float(f"{v:.11e}")
    if isinstance(v, np.integer):
        return int(v)
    if v == "":
        return ""
    return v


def format_json(records, fields):
    """JSON array of records with the same field names as the CSV output."""
    out = [{k: _json_value(rec[k]) for k in fields} for rec in records]
    return json.dumps(out, indent=2) + "\n"
