import numpy as np
import pytest

from phantomsim.generators import ToshkParams, _pair_from_index, contact_mix, erdos_renyi, toshk
from phantomsim.graph import GraphError, topology_report


def test_pair_decoding_is_exhaustive():
    n = 60
    u, v = _pair_from_index(np.arange(n * (n - 1) // 2))
    expected = sorted((a, b) for b in range(n) for a in range(b))
    assert sorted(zip(u.tolist(), v.tolist())) == expected


def test_er_extremes():
    g = erdos_renyi(3, 1.0, 0)
    assert g.edge_count == 3
    g = erdos_renyi(5, 0.0, 0)
    assert g.node_count == 5 and g.edge_count == 0
    assert erdos_renyi(1, 0.5, 0).node_count == 1


def test_er_deterministic_and_simple():
    a = erdos_renyi(2000, 0.003, 42)
    b = erdos_renyi(2000, 0.003, 42)
    assert np.array_equal(a.indices, b.indices)
    a.check()
    assert not np.array_equal(a.indices, erdos_renyi(2000, 0.003, 43).indices)


def test_er_edge_count_binomial():
    n, p = 400, 0.05
    pairs = n * (n - 1) / 2
    counts = np.array([erdos_renyi(n, p, s).edge_count for s in range(200)])
    sd = np.sqrt(pairs * p * (1 - p))
    assert abs(counts.mean() - pairs * p) < 4 * sd / np.sqrt(len(counts))
    assert counts.std() == pytest.approx(sd, rel=0.2)


def test_er_pairs_are_uniform():
    # every pair of a 6-node graph should appear with frequency p
    n, p, reps = 6, 0.3, 4000
    freq = np.zeros((n, n))
    for s in range(reps):
        g = erdos_renyi(n, p, s)
        u, v = g.edges()
        freq[u, v] += 1
    iu = np.triu_indices(n, 1)
    f = freq[iu] / reps
    assert np.all(np.abs(f - p) < 4 * np.sqrt(p * (1 - p) / reps))


def test_er_invalid():
    with pytest.raises(GraphError):
        erdos_renyi(0, 0.1, 0)
    with pytest.raises(GraphError):
        erdos_renyi(10, 1.5, 0)


def test_toshk_tree_when_no_secondary_links():
    g = toshk(ToshkParams(4, 0.0, 2), 0)
    assert g.node_count == 4 and g.edge_count == 3
    assert topology_report(g).component_size == 4
    assert contact_mix(ToshkParams(4, 0.0, 2)) == 1.0


def test_toshk_errors():
    with pytest.raises(GraphError):
        toshk(ToshkParams(1, 0.5, 0.5), 0)
    with pytest.raises(GraphError):
        toshk(ToshkParams(10, 0.5, 10), 0)
    with pytest.raises(GraphError):
        toshk(ToshkParams(10, 1.5, 2), 0)


def test_toshk_deterministic():
    a = toshk(ToshkParams(500, 0.9, 10), 5)
    b = toshk(ToshkParams(500, 0.9, 10), 5)
    assert np.array_equal(a.indices, b.indices)
    a.check()


def test_contact_mix_uses_two_contacts_when_neighbors_are_scarce():
    # with p_neighbor = 0 a single contact yields one link, so k = 3 needs a mix
    q = contact_mix(ToshkParams(100, 0.0, 3))
    assert 0.0 <= q < 1.0
    g = toshk(ToshkParams(3000, 0.0, 3), 1)
    assert g.edge_count * 2 / g.node_count == pytest.approx(3, rel=0.1)


@pytest.mark.slow
def test_toshk_social_regime():
    for seed in range(5):
        rep = topology_report(toshk(ToshkParams(10000, 0.9, 22), seed), diameter_sample=20)
        assert rep.avg_clustering > 0.3
        assert abs(rep.avg_degree - 22) / 22 < 0.2
