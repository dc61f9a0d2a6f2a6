import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from wlab.core import WeingartenData  # noqa: E402
from wlab.profile import IntegratorConfig, integrate_profile  # noqa: E402

_ACCEPTANCE = []


def record_criterion(label, passed, detail):
    """Remember one acceptance line; printed in the terminal summary."""
    _ACCEPTANCE.append((label, bool(passed), detail))


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for label, ok, detail in _ACCEPTANCE:
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {label}: {detail}")


SPHERE_H = WeingartenData(-1, 1, 1, 1)
SPHERE_S = WeingartenData(1, -3, 1, -4)


@pytest.fixture(scope="session")
def sphere_h():
    return integrate_profile(SPHERE_H)


@pytest.fixture(scope="session")
def sphere_s():
    return integrate_profile(SPHERE_S)


@pytest.fixture(scope="session")
def plane_h():
    return integrate_profile(WeingartenData(-1, 1, 1, 0), IntegratorConfig(k_max=3.0))


@pytest.fixture(scope="session")
def plane_s():
    return integrate_profile(WeingartenData(1, -1, 2, -0.5), IntegratorConfig(k_max=1.4))
