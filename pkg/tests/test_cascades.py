import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from phantomsim.cascades import (
    decompose, decompose_batch, level_stats, observed_labels, shape_histogram,
)
from phantomsim.diffusion import DiffusionTrace, run_icm, run_icm_batch
from phantomsim.generators import erdos_renyi
from phantomsim.graph import Graph, GraphError
from phantomsim.partial import PartialView, sample_hidden
from phantomsim.seeding import degree_discount_seeds

from conftest import path_graph, star_graph

# s=0, a=1, j=2, h=3 with edges s-a, a-j, s-h, h-j
DIAMOND = Graph.from_edges(4, [0, 1, 0, 3], [1, 2, 3, 2])


def test_one_visible_one_hidden_parent_splits_half():
    # j (node 2) activated at t=1 by seed 0 (observed) and hidden 1
    g = Graph.from_edges(3, [0, 1], [2, 2])
    tr = run_icm(g, np.array([0, 1]), 1.0, 0)
    d = decompose(tr, PartialView.from_ids(3, [1], 0.3))
    assert d.sigma_o == 1.5 and d.sigma_ph == 0.5 and d.sigma_h == 1


def test_path_through_hidden():
    tr = run_icm(path_graph(3), np.array([0]), 1.0, 0)
    d = decompose(tr, PartialView.from_ids(3, [1], 0.3))
    assert (d.sigma, d.sigma_o, d.sigma_ph, d.sigma_h) == (3, 1, 1, 1)


def test_two_level_fractional_rule():
    tr = run_icm(DIAMOND, np.array([0]), 1.0, 0)
    assert tr.parents(2).tolist() == [1, 3]
    d = decompose(tr, PartialView.from_ids(4, [3], 0.25))
    assert (d.sigma, d.sigma_o, d.sigma_ph, d.sigma_h) == (4, 2.5, 0.5, 1)
    strict = decompose(tr, PartialView.from_ids(4, [3], 0.25), attribution="strict")
    assert (strict.sigma_o, strict.sigma_ph) == (2.0, 1.0)


def test_per_step_and_first_hop():
    tr = run_icm(DIAMOND, np.array([0]), 1.0, 0)
    d = decompose(tr, PartialView.from_ids(4, [3], 0.25))
    assert [(s.step, s.new_activations, s.observed_fraction_new) for s in d.per_step] == [
        (0, 1, 1.0), (1, 2, 0.5), (2, 1, 0.5)]
    assert d.first_hop_observed_fraction == pytest.approx(2 / 4)


def test_mismatch():
    tr = run_icm(path_graph(3), np.array([0]), 1.0, 0)
    with pytest.raises(GraphError):
        decompose(tr, PartialView.from_ids(4, [], 0.0))


@given(st.integers(0, 100_000), st.floats(0.0, 0.8), st.floats(0.05, 0.9))
@settings(max_examples=80, deadline=None)
def test_decomposition_identities(seed, rho, p):
    g = erdos_renyi(80, 0.06, seed)
    view = sample_hidden(g, rho, seed + 1)
    vis = view.visible_ids
    seeds = vis[:3]
    batch = run_icm_batch(g, seeds, p, seed, 8)
    dec = decompose_batch(batch, view)
    assert np.allclose(dec.sigma, dec.sigma_o + dec.sigma_ph + dec.sigma_h, atol=1e-9)
    assert np.array_equal(dec.sigma, batch.sizes())
    assert np.array_equal(dec.sigma_h, ((batch.times >= 0) & view.hidden).sum(axis=1))
    f = observed_labels(batch, view.hidden)
    assert f.min() >= 0.0 and f.max() <= 1.0 + 1e-12
    for i in range(batch.runs):
        single = decompose(batch.trace(i), view)
        assert single.sigma_o == pytest.approx(dec.sigma_o[i], abs=1e-12)


@given(st.integers(0, 100_000), st.floats(0.05, 0.9))
@settings(max_examples=40, deadline=None)
def test_no_hidden_all_observed(seed, p):
    g = erdos_renyi(60, 0.08, seed)
    view = PartialView.from_ids(60, [], 0.0)
    dec = decompose_batch(run_icm_batch(g, np.array([0, 9]), p, seed, 10), view)
    assert np.all(dec.sigma_ph == 0) and np.all(dec.sigma_h == 0)
    assert np.array_equal(dec.sigma_o, dec.sigma)


@given(st.integers(0, 100_000), st.floats(0.05, 0.9))
@settings(max_examples=40, deadline=None)
def test_all_non_seeds_hidden(seed, p):
    g = erdos_renyi(60, 0.08, seed)
    seeds = np.array([0, 9])
    view = PartialView.from_ids(60, np.setdiff1d(np.arange(60), seeds), 0.9)
    dec = decompose_batch(run_icm_batch(g, seeds, p, seed, 10), view)
    assert np.all(dec.sigma_ph == 0)
    assert np.all(dec.sigma_o == 2)


def _trace(times):
    t = np.array(times)
    return DiffusionTrace(t, np.empty(0, int), np.empty(0, int), np.flatnonzero(t == 0))


def test_shape_histogram():
    a = _trace([0, 1, 1, -1])
    assert shape_histogram([a, a]).tolist() == [1, 2]
    b = _trace([0, 1, 2, 3, 3])
    assert shape_histogram([a, b]).tolist() == [1.0, 1.5, 1.0, 2.0]
    star = run_icm(star_graph(6), np.array([0]), 1.0, 0)
    assert shape_histogram([star]).tolist() == [1, 6]
    with pytest.raises(ValueError):
        shape_histogram([])


def test_shape_histogram_batch_matches_list():
    g = erdos_renyi(150, 0.04, 1)
    batch = run_icm_batch(g, np.array([0, 1, 2]), 0.3, 4, 30)
    assert np.allclose(shape_histogram(batch), shape_histogram(list(batch)))


def test_level_stats():
    g = star_graph(5)
    seeds = degree_discount_seeds(g, 1, 0.01)
    ls = level_stats(run_icm(g, seeds, 1.0, 0), g)
    assert ls.mean_degree[0] == 5
    tri = Graph.from_edges(3, [0, 1, 0], [1, 2, 2])
    ls = level_stats(run_icm(tri, np.array([0]), 1.0, 0), tri)
    assert ls.steps.tolist() == [0, 1] and ls.mean_clustering[1] == 1.0
    p5 = path_graph(5)
    ls = level_stats(run_icm(p5, np.array([0]), 1.0, 0), p5)
    assert ls.mean_degree.tolist() == [1, 2, 2, 2, 1]
    assert ls.counts.tolist() == [1, 1, 1, 1, 1]
