from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from quadfun.theory import freegroup, freemod, gamma

settings.register_profile("default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture(scope="session")
def gamma_theory():
    return gamma()


@pytest.fixture(scope="session")
def f2():
    return freemod(2)


@pytest.fixture(scope="session")
def fgroup():
    return freegroup()


@pytest.fixture(params=["gamma", "freemod2"], scope="session")
def finite_theory(request):
    return gamma() if request.param == "gamma" else freemod(2)
