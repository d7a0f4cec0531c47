import sys
from pathlib import Path

import pytest

from pulsefront.profiles import (
    Constant,
    PiecewiseConstant,
    ProfilePair,
    ReciprocalSinusoid,
    Sinusoid,
)

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def sinusoid_pair():
    """a = 1/(1 + 0.3 sin 2 pi x), mu = 1 + 0.5 sin 2 pi x; a_H = mu_A = 1."""
    return ProfilePair(ReciprocalSinusoid(0.3), Sinusoid(1.0, 0.5, 1))


@pytest.fixture
def growth_only_pair():
    return ProfilePair(Constant(1.0), Sinusoid(1.0, 0.5, 1))


@pytest.fixture
def degenerate_pair():
    return ProfilePair(ReciprocalSinusoid(0.4), Sinusoid(1.0, -0.4, 1))


@pytest.fixture
def layered_pair():
    """a = 1 on [0, 1/2), 4 on [1/2, 1); mu = 1."""
    return ProfilePair(PiecewiseConstant([0.0, 0.5], [1.0, 4.0]), Constant(1.0))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
