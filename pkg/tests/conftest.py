import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from ildcc.backbone import build_backbone  # noqa: E402
from ildcc.harness.scenario import default_instance  # noqa: E402
from ildcc.spectral import NetworkGraph  # noqa: E402

# the 10-node, 12-link example backbone (1-based labels)
EXAMPLE10_EDGES_1BASED = [(1, 2), (1, 6), (1, 7), (2, 3), (3, 4), (3, 8), (4, 5), (5, 8), (5, 10), (6, 7), (8, 9), (9, 10)]

EXAMPLE10_LAPLACIAN = np.array(
    [
        [3, -1, 0, 0, 0, -1, -1, 0, 0, 0],
        [-1, 2, -1, 0, 0, 0, 0, 0, 0, 0],
        [0, -1, 3, -1, 0, 0, 0, -1, 0, 0],
        [0, 0, -1, 2, -1, 0, 0, 0, 0, 0],
        [0, 0, 0, -1, 3, 0, 0, -1, 0, -1],
        [-1, 0, 0, 0, 0, 2, -1, 0, 0, 0],
        [-1, 0, 0, 0, 0, -1, 2, 0, 0, 0],
        [0, 0, -1, 0, -1, 0, 0, 3, -1, 0],
        [0, 0, 0, 0, 0, 0, 0, -1, 2, -1],
        [0, 0, 0, 0, -1, 0, 0, 0, -1, 2],
    ]
)


@pytest.fixture
def example10_graph():
    return NetworkGraph(10, [(a - 1, b - 1) for a, b in EXAMPLE10_EDGES_1BASED])


@pytest.fixture(scope="session")
def default_inst():
    return default_instance()


@pytest.fixture(scope="session")
def default_backbone(default_inst):
    return build_backbone(default_inst)


_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def acceptance_report():
    return _ACCEPTANCE_LINES


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
