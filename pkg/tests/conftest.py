import sys

import pytest

from braidforge.degeneration import Dataset


@pytest.fixture(scope="session")
def magician():
    return Dataset.load("magician")


@pytest.fixture(scope="session")
def pillow():
    return Dataset.load("pillow")


@pytest.fixture(scope="session")
def phi2(magician):
    return magician.assembled()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
