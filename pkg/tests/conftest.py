import math

import pytest

from ropelength import zoo


@pytest.fixture(scope="session")
def unit_square():
    return zoo.square(side=2.0, n=4)


@pytest.fixture(scope="session")
def circle512():
    return zoo.circle(n=512)


@pytest.fixture(scope="session")
def hopf256():
    return zoo.hopf(n=256)


@pytest.fixture(scope="session")
def ellipse1024():
    return zoo.ellipse(n=1024)


THIRD_PI = math.pi / 3
HALF_PI = math.pi / 2


ACCEPTANCE = []


def record(criterion, ok, detail):
    """Log one acceptance outcome for the terminal summary."""
    ACCEPTANCE.append((criterion, bool(ok), detail))
    print(f"criterion {criterion}: {'PASS' if ok else 'FAIL'} {detail}")


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion, ok, detail in sorted(ACCEPTANCE, key=lambda r: (int(str(r[0]).split(".")[0]), str(r[0]))):
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}  {detail}")
