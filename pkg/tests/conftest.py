import numpy as np
import pytest

from ratiokit.params import SpectralParams

ACCEPTANCE_LINES = []


@pytest.fixture
def golden():
    return SpectralParams(1, 1, 1, (2, 3), (0.5, 4))


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(line)
