import numpy as np
import pytest

from pdtv.operators import SchemeKind

SCHEMES = [SchemeKind.STANDARD, SchemeKind.STAGGERED]


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
