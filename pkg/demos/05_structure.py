"""k-core, densest subgraph, triangles and PageRank."""

import numpy as np

from pargraph import generators as gen
from pargraph.algorithms import densest_subgraph, kcore, pagerank, triangle_count

T = gen.torus3d(8)
c = kcore(T)
print(f"torus: every coreness is {set(c.coreness.tolist())}, {triangle_count(T)} triangles")

G = gen.rmat(scale=12, edge_factor=8, seed=9)
c = kcore(G)
print(f"rmat: max core {c.k_max} after {c.rounds} bucket rounds")

d = densest_subgraph(G, 0.001)
print(f"densest subgraph estimate: {d.vertices.size} vertices, density {d.density:.3f}")
print(f"triangles: {triangle_count(G)}")

pr = pagerank(G)
top = np.argsort(-pr.ranks)[:5]
print(f"pagerank converged in {pr.iterations} iterations; top vertices {top.tolist()}")
