"""
Evaluation networks
===================

Watts-Strogatz graphs interpolate between a ring lattice and a random graph
as the rewiring probability grows. Barabasi-Albert graphs grow by
preferential attachment and end up scale-free.
"""

import numpy as np

from lurkergame import NetworkSpec, generate, netgen

# a ring lattice is fully determined: path length close to n/8, clustering 1/2
ring = generate(NetworkSpec("WS", 5000, 4, beta=0.0))
print("ring:", ring.node_count, "nodes,", ring.n_edges, "edges")
print("path length, diameter:", netgen.path_stats(ring))
print("clustering:", netgen.clustering_coefficient(ring))

# rewiring shortens paths long before it destroys clustering
for beta in (0.01, 0.1, 0.3, 0.5, 0.8):
    g = generate(NetworkSpec("WS", 2000, 4, beta=beta, seed=1))
    apl, diam = netgen.path_stats(g)
    print(f"beta={beta:<5} L={apl:7.2f}  D={diam:3d}  C={netgen.clustering_coefficient(g):.4f}")

# preferential attachment: a few hubs, many low-degree nodes
ba = generate(NetworkSpec("BA", 5000, 2, seed=3))
deg = ba.degrees
print("BA mean degree:", deg.mean(), " max degree:", deg.max())
counts = np.bincount(deg)
for k in (2, 4, 8, 16, 32):
    print(f"  P(k={k:>2}) = {counts[k] / deg.size if k < counts.size else 0:.4f}")

# graphs round-trip through the plain edge-list format
text = netgen.write_edgelist(ba)
print(text.splitlines()[:3])
