import random

import pytest

from orelab.fields import field_make
from orelab.ore import OreRing
from orelab.weyl import WeylRing

F2 = "GF(2)"
F4 = "GF(4; x^2+x+1; q=2)"
F9 = "GF(9; x^2+1; q=3)"
F3S = "GF(3)(s)"


@pytest.fixture
def rng():
    return random.Random(12345)


@pytest.fixture(scope="session")
def f4():
    return field_make(F4)


@pytest.fixture(scope="session")
def r4(f4):
    return OreRing(f4, "twisted")


@pytest.fixture(scope="session")
def r2():
    return OreRing(field_make(F2), "twisted")


@pytest.fixture(scope="session")
def dx():
    """QQ(x)[d1]."""
    return OreRing(field_make("QQ(x)"), "differential", var=1)


@pytest.fixture(scope="session")
def w2():
    return WeylRing(field_make("QQ(x1,x2)"), 2)


def nonzero(make):
    while True:
        v = make()
        if not v.is_zero():
            return v


def pytest_terminal_summary(terminalreporter):
    import sys

    module = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(results):
        terminalreporter.write_line(results[number])
