"""
Building oracle networks
========================

Two synthetic families are available: Erdos-Renyi graphs with no structure
beyond their density, and TOSHK growth graphs where newcomers attach to a
contact and then to the contact's friends, which produces triangles.
"""

import numpy as np

from phantomsim.generators import ToshkParams, contact_mix, erdos_renyi, toshk
from phantomsim.graph import largest_component, topology_report

n = 3000

# A TOSHK graph with average degree near 22 ...
params = ToshkParams(n=n, p_neighbor=0.9, k_target=22)
social = toshk(params, rng_seed=0)
print("share of newcomers using a single contact:", round(contact_mix(params), 3))

# ... and an ER graph with the same density.
avg = 2 * social.edge_count / n
random_net = erdos_renyi(n, avg / (n - 1), rng_seed=0)

# Diameter and radius are sampled from 200 BFS sources to keep this quick.
for name, g in (("toshk", social), ("er", random_net)):
    rep = topology_report(g, diameter_sample=200)
    print(f"{name:6s} deg {rep.avg_degree:6.2f}  clustering {rep.avg_clustering:.3f}  "
          f"assortativity {rep.assortativity:+.3f}  diameter~{rep.diameter}")

# Both graphs share a density but differ sharply in clustering. Degree
# distributions differ too: TOSHK has a long right tail.
print("max degree toshk / er:", social.degrees().max(), random_net.degrees().max())

lcc = largest_component(random_net)
print("ER giant component keeps", lcc.node_count, "of", n, "nodes")
assert np.array_equal(random_net.labels[lcc.origin], lcc.labels)
