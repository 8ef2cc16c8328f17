import numpy as np
import pytest
from scipy import stats

from phantomsim.generators import erdos_renyi
from phantomsim.graph import Graph, GraphError
from phantomsim.partial import (
    PartialView, hidden_count, partial_graph, read_view, round_half_up, sample_hidden, write_view,
)

from conftest import complete_graph, path_graph


def test_counts():
    assert round_half_up(8309.5) == 8310
    assert hidden_count(0.5, 16619) == 8310
    assert hidden_count(0.3, 10) == 3
    g = path_graph(10)
    assert sample_hidden(g, 0.3, 1).hidden.sum() == 3
    assert sample_hidden(g, 0.0, 1).hidden.sum() == 0


def test_rho_one_rejected():
    with pytest.raises(GraphError):
        sample_hidden(path_graph(4), 1.0, 0)


def test_deterministic():
    g = path_graph(100)
    assert np.array_equal(sample_hidden(g, 0.4, 9).hidden, sample_hidden(g, 0.4, 9).hidden)


def test_partial_triangle(triangle):
    gp = partial_graph(triangle, PartialView.from_ids(3, [2], 1 / 3))
    assert gp.node_count == 2 and gp.edge_count == 1
    assert gp.origin.tolist() == [0, 1]


def test_partial_path_middle_hidden():
    gp = partial_graph(path_graph(3), PartialView.from_ids(3, [1], 0.3))
    assert gp.node_count == 2 and gp.edge_count == 0
    assert gp.origin.tolist() == [0, 2]


def test_partial_identity():
    g = erdos_renyi(50, 0.1, 3)
    gp = partial_graph(g, PartialView.from_ids(50, [], 0.0))
    assert np.array_equal(gp.indptr, g.indptr) and np.array_equal(gp.indices, g.indices)


def test_mismatch():
    with pytest.raises(GraphError):
        partial_graph(path_graph(3), PartialView.from_ids(4, [], 0.0))


@pytest.mark.parametrize("rho", [0.1, 0.3, 0.5])
def test_partial_graph_properties(rho):
    g = erdos_renyi(300, 0.05, 1)
    view = sample_hidden(g, rho, 2)
    gp = partial_graph(g, view)
    gp.check()
    assert gp.node_count + view.hidden.sum() == g.node_count
    u, v = gp.edges()
    ou, ov = gp.origin[u], gp.origin[v]
    assert not view.hidden[ou].any() and not view.hidden[ov].any()
    oracle = set(zip(*map(list, g.edges())))
    assert all((a, b) in oracle for a, b in zip(ou.tolist(), ov.tolist()))
    # induced: every oracle edge between visible nodes survives
    keep = sum(1 for a, b in oracle if not view.hidden[a] and not view.hidden[b])
    assert keep == gp.edge_count


def test_hidden_frequency_uniform():
    g = complete_graph(20)
    reps = 3000
    counts = np.zeros(20)
    for s in range(reps):
        counts += sample_hidden(g, 0.25, s).hidden
    expected = reps * 5 / 20
    chi2 = ((counts - expected) ** 2 / expected).sum()
    assert stats.chi2.sf(chi2, 19) > 1e-3


def test_view_file_roundtrip(tmp_path):
    g = Graph.from_edges(4, [0, 1, 2], [1, 2, 3], labels=[10, 20, 30, 40])
    view = PartialView.from_ids(4, [1, 3], 0.5, sample_id=7)
    f = tmp_path / "v.view"
    write_view(view, g, f)
    assert f.read_text().splitlines() == ["0.5 7", "20", "40"]
    back = read_view(f, g)
    assert back.rho == 0.5 and back.sample_id == 7
    assert back.hidden_ids.tolist() == [1, 3]
