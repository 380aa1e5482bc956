import pytest

from gkmhyper.families import bf_graph, br_graph, hij_graph, r_graph

ACCEPTANCE: dict[int, str] = {}


def scope_graphs(max_sum: int = 6):
    """Family graphs small enough for exhaustive checks."""
    out = [bf_graph(n) for n in range(1, 5)]
    for i in range(0, max_sum + 1):
        for j in range(0, max_sum + 1 - i):
            if i + j >= 2:
                out.append(r_graph(i, j))
            if i >= 1 or j >= 2:
                out.append(br_graph(i, j))
    out += [hij_graph(1, 1), hij_graph(1, 2), hij_graph(2, 2)]
    return out


@pytest.fixture(scope="session")
def small_graphs():
    return scope_graphs(5)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
