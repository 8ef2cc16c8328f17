import numpy as np
import pytest

from phantomsim.graph import Graph


def path_graph(n):
    return Graph.from_edges(n, np.arange(n - 1), np.arange(1, n))


def star_graph(leaves):
    return Graph.from_edges(leaves + 1, np.zeros(leaves, dtype=int), np.arange(1, leaves + 1))


def complete_graph(n):
    u, v = np.triu_indices(n, 1)
    return Graph.from_edges(n, u, v)


def grid_graph(rows, cols):
    us, vs = [], []
    for r in range(rows):
        for c in range(cols):
            i = r * cols + c
            if c + 1 < cols:
                us.append(i)
                vs.append(i + 1)
            if r + 1 < rows:
                us.append(i)
                vs.append(i + cols)
    return Graph.from_edges(rows * cols, us, vs)


@pytest.fixture
def triangle():
    return complete_graph(3)


@pytest.fixture
def path5():
    return path_graph(5)
