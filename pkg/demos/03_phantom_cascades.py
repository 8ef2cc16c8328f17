"""
Observed, phantom and hidden activations
========================================

A cascade on the oracle touches three kinds of nodes: hidden nodes, visible
nodes reached along fully visible paths, and visible nodes that needed a
hidden relay. The last group is what an observer of the partial network
cannot explain.
"""

import numpy as np

from phantomsim.cascades import decompose, decompose_batch, shape_histogram
from phantomsim.diffusion import exact_icm_expectations, run_icm, run_icm_batch
from phantomsim.generators import ToshkParams, toshk
from phantomsim.graph import Graph
from phantomsim.partial import PartialView, partial_graph, sample_hidden
from phantomsim.seeding import degree_discount_seeds

# %%
# A hand-sized example: a path 0-1-2-3 where node 1 is hidden.
path = Graph.from_edges(4, [0, 1, 2], [1, 2, 3])
view = PartialView.from_ids(4, [1], rho=0.25)
trace = run_icm(path, np.array([0]), probs=1.0, rng_seed=0)
print(decompose(trace, view))
# Nodes 2 and 3 are active only because hidden node 1 relayed the cascade.

# The enumeration oracle gives the same split in expectation at any p.
print(exact_icm_expectations(path, np.array([0]), 0.5, view))

# %%
# At scale, the phantom share grows with the fraction of hidden nodes.
g = toshk(ToshkParams(3000, 0.9, 22), rng_seed=2)
for rho in (0.1, 0.3, 0.5):
    v = sample_hidden(g, rho, rng_seed=5)
    seeds = degree_discount_seeds(partial_graph(g, v), 3, p=0.05)
    batch = run_icm_batch(g, seeds, 0.05, rng_seed=1, runs=200)
    dec = decompose_batch(batch, v)
    print(f"rho={rho}: sigma {dec.sigma.mean():6.1f}  observed {dec.sigma_o.mean():6.1f}  "
          f"phantom {dec.sigma_ph.mean():5.1f}  hidden {dec.sigma_h.mean():5.1f}")

# Cascade shape: mean new activations per step among cascades that reach it.
print("new activations per step:", np.round(shape_histogram(batch), 1))
