import math

import numpy as np
import pytest
import scipy.constants

from guideret import specfun
from guideret.errors import DomainError
from guideret.model import (
    CONSTANTS,
    EmitterPair,
    GuideSpec,
    ModeFamily,
    Orientation,
    build_mode_table,
    cutoff_wavenumbers,
    families_for,
    validate_below_cutoff,
    violated_cutoffs,
)


def test_constants_are_codata():
    assert CONSTANTS.c == scipy.constants.c
    assert CONSTANTS.eps0 == scipy.constants.epsilon_0
    assert CONSTANTS.hbar == scipy.constants.hbar


def test_pair_wavenumber():
    pair = EmitterPair(5e-7, 1e-8)
    assert pair.k0 == pytest.approx(1.2566370614e7, rel=1e-10)
    assert pair.k0 * pair.lambda0 == pytest.approx(2 * math.pi, rel=1e-15)
    assert pair.omega0 == pytest.approx(CONSTANTS.c * pair.k0)
    assert pair.orientation is Orientation.AXIAL


def test_from_k0_keeps_k0_exact():
    pair = EmitterPair.from_k0(1.234e8, 1e-8, orientation="radial")
    assert pair.k0 == 1.234e8
    assert pair.replace(z=2e-8).k0 == 1.234e8
    assert pair.replace(z=2e-8).z == 2e-8


@pytest.mark.parametrize(
    "kw",
    [
        dict(lambda0=0.0, z=1e-8),
        dict(lambda0=-1.0, z=1e-8),
        dict(lambda0=5e-7, z=0.0),
        dict(lambda0=5e-7, z=-1e-8),
        dict(lambda0=math.nan, z=1e-8),
        dict(lambda0=5e-7, z=1e-8, d_a=math.inf),
    ],
)
def test_pair_validation(kw):
    with pytest.raises(DomainError):
        EmitterPair(**kw)


def test_pair_bad_orientation():
    with pytest.raises(ValueError):
        EmitterPair(5e-7, 1e-8, orientation="diagonal")


@pytest.mark.parametrize(
    "kw", [dict(radius=0.0), dict(radius=1e-8, max_modes=0), dict(radius=1e-8, tail_tol=1.0),
           dict(radius=1e-8, tail_tol=0.0), dict(radius=1e-8, max_modes=2.5)]
)
def test_guide_validation(kw):
    with pytest.raises(DomainError):
        GuideSpec(**kw)


def test_cutoffs():
    k_tm, k_te = cutoff_wavenumbers(GuideSpec(1e-8))
    assert k_tm == pytest.approx(2.404826e8, rel=1e-6)
    assert k_te == pytest.approx(1.841184e8, rel=1e-6)
    k_tm2, k_te2 = cutoff_wavenumbers(GuideSpec(2e-8))
    assert k_tm2 == pytest.approx(k_tm / 2, rel=1e-15)
    assert k_te2 == pytest.approx(k_te / 2, rel=1e-15)


def test_cutoffs_match_first_table_entries():
    g = GuideSpec(3.7e-8)
    k_tm, k_te = cutoff_wavenumbers(g)
    assert build_mode_table(ModeFamily.TM0, g, 1).radial_wavenumbers[0] == pytest.approx(k_tm, rel=1e-12)
    assert build_mode_table(ModeFamily.TE1, g, 1).radial_wavenumbers[0] == pytest.approx(k_te, rel=1e-12)


def test_tm0_first_entry():
    g = GuideSpec(1e-8)
    t = build_mode_table(ModeFamily.TM0, g, 1)
    assert len(t) == 1
    assert t.radial_wavenumbers[0] == pytest.approx(2.404826e8, rel=1e-6)
    assert t.norm_integrals[0] == pytest.approx(1e-16 / 2 * 0.519147**2, rel=1e-5)


def test_te1_first_entry():
    t = build_mode_table(ModeFamily.TE1, GuideSpec(1e-8), 1)
    assert t.radial_wavenumbers[0] == pytest.approx(1.841184e8, rel=1e-6)


@pytest.mark.parametrize("family", list(ModeFamily))
def test_norm_integrals_closed_forms(family):
    import mpmath

    R = 1e-8
    t = build_mode_table(family, GuideSpec(R), 25)
    for x, norm in zip(t.roots, t.norm_integrals):
        j0, j1, j2 = (float(mpmath.besselj(n, x)) for n in (0, 1, 2))
        if family is ModeFamily.TM0:
            ref = R * R / 2 * j1**2
        elif family is ModeFamily.TE1:
            ref = R * R / 2 * (1 - 1 / x**2) * j1**2
        else:
            ref = R * R / 4 * (j0 - j2) ** 2
        assert norm == pytest.approx(ref, rel=1e-10)


@pytest.mark.parametrize("family", list(ModeFamily))
def test_table_invariants(family):
    t = build_mode_table(family, GuideSpec(1e-8), 80)
    assert len(t) == 80
    assert np.all(np.diff(t.radial_wavenumbers) > 0)
    assert np.all(t.radial_wavenumbers > 0)
    assert np.all(t.norm_integrals > 0)


@pytest.mark.parametrize("family", list(ModeFamily))
@pytest.mark.parametrize("R", [1e-9, 1e-8, 3.3e-8])
def test_radius_scaling_exact(family, R):
    a = build_mode_table(family, GuideSpec(R), 30)
    b = build_mode_table(family, GuideSpec(2 * R), 30)
    assert np.array_equal(b.norm_integrals, 4 * a.norm_integrals)
    assert np.array_equal(b.radial_wavenumbers, a.radial_wavenumbers / 2)


@pytest.mark.parametrize("count", [0, -1, 1.5])
def test_table_bad_count(count):
    with pytest.raises(DomainError):
        build_mode_table(ModeFamily.TM0, GuideSpec(1e-8), count)


def test_families():
    assert families_for("axial") == (ModeFamily.TM0,)
    assert families_for(Orientation.RADIAL) == (ModeFamily.TE1, ModeFamily.TM1)
    assert families_for("azimuthal") == (ModeFamily.TE1, ModeFamily.TM1)


def test_below_cutoff_default_parameters():
    g = GuideSpec(1e-8)
    for o in Orientation:
        assert validate_below_cutoff(EmitterPair(5e-7, 1e-8, orientation=o), g)


def test_above_cutoff_axial():
    g = GuideSpec(1e-8)
    pair = EmitterPair.from_k0(3e8, 1e-8)
    assert not validate_below_cutoff(pair, g)
    assert violated_cutoffs(pair, g) == [ModeFamily.TM0]


def test_boundary_is_excluded():
    g = GuideSpec(1e-8)
    q11 = specfun.roots(1, specfun.ZeroKind.DERIVATIVE, 1)[0]
    pair = EmitterPair.from_k0(q11 / 1e-8, 1e-8, orientation="radial")
    assert not validate_below_cutoff(pair, g)
    assert violated_cutoffs(pair, g) == [ModeFamily.TE1]
    # axial only looks at TM0, whose cutoff is higher
    assert validate_below_cutoff(pair.replace(orientation="axial"), g)


def test_radial_between_cutoffs():
    # above the TE cutoff, below the TM1 one
    g = GuideSpec(1e-8)
    pair = EmitterPair.from_k0(2e8, 1e-8, orientation="azimuthal")
    assert violated_cutoffs(pair, g) == [ModeFamily.TE1]
