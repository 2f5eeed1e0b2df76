import itertools

import networkx as nx
import numpy as np
import pytest

from copulagraph.sampler import from_edges


def graph_from_nx(G):
    G = nx.convert_node_labels_to_integers(G)
    return from_edges(G.number_of_nodes(), list(G.edges()))


@pytest.fixture
def triangle():
    return from_edges(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def path4():
    return from_edges(4, [(0, 1), (1, 2), (2, 3)])


@pytest.fixture
def star3():
    return from_edges(4, [(0, 1), (0, 2), (0, 3)])


@pytest.fixture
def cycle5():
    return from_edges(5, [(i, (i + 1) % 5) for i in range(5)])


def random_bernoulli_graphs(count, max_n=30, seed=12345):
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(4, max_n + 1))
        p = float(rng.uniform(0.1, 0.9))
        pairs = [(i, j) for i, j in itertools.combinations(range(n), 2) if rng.random() < p]
        out.append(from_edges(n, pairs))
    return out


ACCEPTANCE = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[ACCEPTANCE] = []


@pytest.fixture
def acceptance_log(request):
    """Append one PASS/FAIL line per criterion; echoed now and in the terminal summary."""
    lines = request.config.stash[ACCEPTANCE]

    def log(criterion, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
        lines.append(line)
        print(line)
        return ok

    return log


def pytest_terminal_summary(terminalreporter, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in sorted(lines, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
