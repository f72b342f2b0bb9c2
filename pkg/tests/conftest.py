import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ldpc_anchor.geometry import GeometrySpec, build_bundle  # noqa: E402

@pytest.fixture(scope="session")
def eg22():
    return build_bundle([GeometrySpec("EG", 2, 2)])


@pytest.fixture(scope="session")
def eg32():
    return build_bundle([GeometrySpec("EG", 3, 2)])


@pytest.fixture(scope="session")
def eg23():
    return build_bundle([GeometrySpec("EG", 2, 3)])


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
