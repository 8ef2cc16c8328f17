"""
Partial views and seed selection
================================

A partial view hides a uniform fraction rho of the oracle's nodes. Seeds are
chosen on what remains visible, then reused unchanged on the oracle.
"""

import numpy as np

from phantomsim.generators import ToshkParams, toshk
from phantomsim.partial import partial_graph, sample_hidden
from phantomsim.seeding import degree_discount_seeds, random_seeds, seed_count

g = toshk(ToshkParams(2000, 0.9, 16), rng_seed=1)

for rho in (0.1, 0.3, 0.5):
    view = sample_hidden(g, rho, rng_seed=7)
    gp = partial_graph(g, view)
    # hiding nodes removes their edges too, so visible degrees drop
    print(f"rho={rho}: {len(view.hidden_ids)} hidden, partial graph has {gp.node_count} nodes, "
          f"mean degree {2 * gp.edge_count / gp.node_count:.2f} (oracle {2 * g.edge_count / g.node_count:.2f})")

view = sample_hidden(g, 0.3, rng_seed=7)
gp = partial_graph(g, view)

# gamma is a fraction of the visible nodes; the count rounds half-up, minimum 1
k = seed_count(0.01, gp.node_count)
dd = degree_discount_seeds(gp, k, p=0.01, gamma=0.01)
rnd = random_seeds(gp, k, rng_seed=3, gamma=0.01)

# Seed ids are oracle ids, never hidden ones.
assert not view.hidden[dd.seeds].any()
print(f"{k} seeds; degree-discount picks mean oracle degree {g.degrees()[dd.seeds].mean():.1f}, "
      f"random picks {g.degrees()[rnd.seeds].mean():.1f}")
