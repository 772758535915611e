import networkx as nx
import numpy as np
import pytest

from lurkergame.netgen import Graph


def from_nx(h):
    """Relabel a networkx graph to 0..n-1 and convert it."""
    h = nx.convert_node_labels_to_integers(h)
    return Graph.from_edges(h.number_of_nodes(), list(h.edges()))


def to_nx(g):
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(g.edges.tolist())
    return h


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def star5():
    # center 0 with five leaves
    return Graph.from_edges(6, [(0, i) for i in range(1, 6)])


# acceptance criteria: number -> [title, passed so far, detail lines]
_CRITERIA = {}


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.skipped or (rep.when != "call" and rep.passed):
        return
    number, title = mark.args
    entry = _CRITERIA.setdefault(number, [title, True, []])
    entry[1] = entry[1] and rep.passed
    entry[2] += [v for k, v in item.user_properties if k == "detail" and v not in entry[2]]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, passed, details = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2}: {'PASS' if passed else 'FAIL'}  {title}")
        for d in details:
            terminalreporter.write_line(f"              {d}")
