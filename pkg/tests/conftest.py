import numpy as np
import pytest

from cheegerkit.graph_core import Hamiltonian, SignedWeightedGraph
from cheegerkit.instances import cycle_graph, path_graph

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def k2():
    return Hamiltonian(SignedWeightedGraph(2, ((0, 1, 1.0),)))


@pytest.fixture
def p3():
    return Hamiltonian(path_graph(3))


@pytest.fixture
def c4():
    return Hamiltonian(cycle_graph(4))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
