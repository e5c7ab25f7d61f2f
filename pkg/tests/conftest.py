"""Shared fixtures and the acceptance summary printed at the end of a run."""
import time

import pytest

from guideret import EmitterPair, GuideSpec

LAMBDA0 = 5e-7
RADIUS = 1e-8
DIPOLE = 1e-30

_ACCEPTANCE = []


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, label): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and rep.outcome != "passed"):
        _ACCEPTANCE.append((mark.args[0], mark.args[1], item.name, rep.outcome))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number, label, name, outcome in sorted(_ACCEPTANCE, key=lambda r: (int(r[0]), r[2])):
        status = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion {number}: {label} ({name})")
    t0 = getattr(terminalreporter.config, "_t0", None)
    if t0 is not None and any(n == 9 for n, *_ in _ACCEPTANCE):
        elapsed = time.perf_counter() - t0
        status = "PASS" if elapsed < 60 else "FAIL"
        terminalreporter.write_line(f"[{status}] criterion 9: full suite runtime {elapsed:.1f} s (< 60 s)")


@pytest.fixture
def guide():
    return GuideSpec(RADIUS)


@pytest.fixture
def axial_pair():
    return EmitterPair(LAMBDA0, 1e-8, DIPOLE, DIPOLE, "axial")


@pytest.fixture
def radial_pair():
    return EmitterPair(LAMBDA0, 5e-8, DIPOLE, DIPOLE, "radial")


def pytest_sessionstart(session):
    session.config._t0 = time.perf_counter()
