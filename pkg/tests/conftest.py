"""Shared fixtures and frozen reference values.

Reference constants were produced by independent runs (separate
integrator, mpmath recursions at 50 digits) and are frozen here so the
suite detects regressions rather than re-deriving its own answers.
"""

import numpy as np
import pytest

from floqbath import (
    DriveParams,
    TransitionSpectrum,
    characteristic_exponent,
    periodic_fourier,
)

OMEGA0_REF = float(np.sqrt(2.0))
OMEGA1_REF = 1.0

# monodromy trace for (sqrt 2, 1.0); DOP853 at rtol 1e-12 and RK45 at
# 1e-11 agree to 1.3e-11
TRACE_REF = -1.5162049961008761

# characteristic exponent for (sqrt 2, 1.0), continuation at tol 1e-12
NU_REF = 1.3869366740609057

# weak drive (sqrt 2, 0.1) sits just below the undriven value sqrt 2
NU_WEAK_DRIVE_REF = 1.4142110369639205

# |v_{-1}|^2 / |v_0|^2 for the reference drive
WEIGHT_RATIO_M1_REF = 0.08352958456610973


@pytest.fixture(scope="session")
def drive():
    return DriveParams(OMEGA0_REF, OMEGA1_REF)


@pytest.fixture(scope="session")
def nu(drive):
    return characteristic_exponent(drive, tol=1e-12)


@pytest.fixture(scope="session")
def floquet(drive, nu):
    return periodic_fourier(drive, nu)


@pytest.fixture(scope="session")
def deep_floquet(drive, nu):
    # tail kept far below the default so weights ~1e-22 survive
    return periodic_fourier(drive, nu, max_L=64, tail_threshold=1e-28)


@pytest.fixture(scope="session")
def spectrum(deep_floquet):
    return TransitionSpectrum.from_floquet(deep_floquet)


def pytest_configure(config):
    config._acceptance_lines = []


@pytest.fixture
def acceptance_report(request):
    def _report(criterion: str, passed: bool, detail: str = "") -> bool:
        status = "PASS" if passed else "FAIL"
        line = f"[{status}] {criterion}"
        if detail:
            line += f" -- {detail}"
        request.config._acceptance_lines.append(line)
        return passed

    return _report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = getattr(config, "_acceptance_lines", None)
    if lines:
        terminalreporter.write_sep("-", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
