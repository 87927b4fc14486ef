import pytest

from snbclab.graph_core import Ordering, OrderedGraph, bouquet, cycle, subgraph, theta
from snbclab.walks_homotopy import reduce_walk

_CRITERIA: list[str] = []


def record(line: str) -> None:
    """Keep a one-line verdict for the terminal summary and echo it."""
    _CRITERIA.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)


def edge_psi(g, e: int) -> OrderedGraph:
    """The single-edge subgraph through directed edge ``e``, ordered along ``e``."""
    ends = list(dict.fromkeys((g.tail[e], g.head[e])))
    sub = subgraph(g, ends, [e])
    vorder = tuple(sub.vindex[g.vertex_ids[v]] for v in ends)
    return OrderedGraph(sub, Ordering(vorder, (sub.eindex[g.edge_ids[e]],)))


def walk_type(g, labels):
    return reduce_walk(g, [g.eindex[x] for x in labels]).type


@pytest.fixture(scope="session")
def loop_type():
    return walk_type(cycle(1), ["c0"])


@pytest.fixture(scope="session")
def figure_eight_type():
    return walk_type(bouquet(2), ["a", "b"])


@pytest.fixture(scope="session")
def theta_type():
    return walk_type(theta(), ["a", "b'", "a", "c'"])
