import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phantomsim.generators import erdos_renyi
from phantomsim.graph import Graph, GraphError
from phantomsim.partial import PartialView, partial_graph, sample_hidden
from phantomsim.seeding import (
    degree_discount_seeds, random_seeds, read_seeds, seed_count, write_seeds,
)

from conftest import star_graph


def brute_degree_discount(g, k, p):
    deg = g.degrees()
    chosen = []
    for _ in range(k):
        best, best_u = None, None
        for u in range(g.node_count):
            if u in chosen:
                continue
            t = sum(1 for w in g.neighbors(u) if w in chosen)
            s = deg[u] - 2 * t - (deg[u] - t) * t * p
            if best is None or s > best:
                best, best_u = s, u
        chosen.append(best_u)
    return chosen


def test_star_center_first():
    assert degree_discount_seeds(star_graph(5), 1, 0.01).seeds.tolist() == [0]


def test_star_plus_edge():
    # center 0, leaves 1..5, disjoint edge 6-7
    g = Graph.from_edges(8, [0, 0, 0, 0, 0, 6], [1, 2, 3, 4, 5, 7])
    assert degree_discount_seeds(g, 2, 0.01).seeds.tolist() == [0, 6]


def test_exhaustion():
    g = star_graph(4)
    s = degree_discount_seeds(g, 5, 0.01)
    assert sorted(s.seeds.tolist()) == list(range(5))
    assert s.seeds[0] == 0


def test_too_many_seeds():
    with pytest.raises(GraphError):
        degree_discount_seeds(star_graph(2), 4, 0.01)
    with pytest.raises(GraphError):
        random_seeds(star_graph(2), 0, 1)


@given(st.integers(0, 10_000), st.sampled_from([0.0, 0.01, 0.1, 0.5]), st.integers(1, 12))
@settings(max_examples=60, deadline=None)
def test_matches_brute_force(seed, p, k):
    g = erdos_renyi(25, 0.15, seed)
    assert degree_discount_seeds(g, k, p).seeds.tolist() == brute_degree_discount(g, k, p)


def test_p0_without_adjacent_picks_is_top_degree():
    g = star_graph(3)
    h = Graph.from_edges(12, [0, 0, 0, 4, 4, 8], [1, 2, 3, 5, 6, 9])
    s = degree_discount_seeds(h, 2, 0.0).seeds.tolist()
    assert s == [0, 4]
    assert g.degrees()[0] == 3


def test_updates_touch_only_neighbors():
    g = erdos_renyi(200, 0.05, 3)
    ups = []
    s = degree_discount_seeds(g, 10, 0.01, updates=ups)
    allowed = set()
    for u in s.seeds.tolist():
        allowed.update(g.neighbors(u).tolist())
    assert set(ups) <= allowed
    assert len(ups) <= sum(g.degrees()[s.seeds])


def test_seeds_are_visible_in_oracle_ids():
    g = erdos_renyi(300, 0.03, 1)
    view = sample_hidden(g, 0.5, 4)
    gp = partial_graph(g, view)
    for sel in (degree_discount_seeds(gp, 20, 0.01), random_seeds(gp, 20, 5)):
        assert not view.hidden[sel.seeds].any()
        assert len(set(sel.seeds.tolist())) == 20


def test_random_seeds():
    g = star_graph(9)
    assert sorted(random_seeds(g, 10, 1).seeds.tolist()) == list(range(10))
    assert np.array_equal(random_seeds(g, 4, 7).seeds, random_seeds(g, 4, 7).seeds)


def test_seed_count():
    assert seed_count(0.0001, 9000) == 1
    assert seed_count(0.0001, 4000) == 1
    assert seed_count(0.01, 8500) == 85
    assert seed_count(0.001, 16619 - 8310) == 8


def test_seed_file_roundtrip(tmp_path):
    g = Graph.from_edges(3, [0, 1], [1, 2], labels=[5, 6, 7])
    f = tmp_path / "s.seeds"
    from phantomsim.seeding import SeedSet
    write_seeds(SeedSet(np.array([2, 0]), 0.1), g, f)
    assert read_seeds(f, g).seeds.tolist() == [2, 0]
