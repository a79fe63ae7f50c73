import pytest

from mstci.graph import build_graph, complete_graph, cycle_graph, tree_from_pairs

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def k4():
    return complete_graph(4)


@pytest.fixture
def k5():
    return complete_graph(5)


@pytest.fixture
def h5():
    # K_5 minus (1,3), (1,4)
    return build_graph(5, [(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (2, 4), (3, 4)])


@pytest.fixture
def c4():
    return cycle_graph(4)


@pytest.fixture
def k5_path(k5):
    return tree_from_pairs(k5, [(0, 1), (1, 2), (2, 3), (3, 4)], 0)


@pytest.fixture
def k4_path(k4):
    return tree_from_pairs(k4, [(0, 1), (1, 2), (2, 3)], 0)
