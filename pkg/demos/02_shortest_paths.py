"""Traversal and path problems on generated graphs."""

import numpy as np

from pargraph import generators as gen
from pargraph.algorithms import UNREACHED, bellman_ford, betweenness, bfs, spanner, weighted_bfs, widest_path

G = gen.grid(30, 30, weighted=True, seed=2)
src = 0

hops = bfs(G, src)
dist = weighted_bfs(G, src)
bf = bellman_ford(G, src)
print("max hop distance:", hops.max())
print("weighted BFS agrees with Bellman-Ford:", np.array_equal(dist, bf))
print("distance to the far corner:", dist[G.n - 1])

# widest path: the bucketed and Bellman-Ford variants must agree
w1 = widest_path(G, src, method="bucketed")
w2 = widest_path(G, src, method="bellman_ford")
print("widest path variants agree:", np.array_equal(w1, w2))

# single-source betweenness dependencies
dep = betweenness(gen.path(7), 0)
print("path graph dependencies from 0:", np.round(dep, 2).tolist())

# spanners keep the graph connected with fewer edges
H = gen.er(2000, 0.01, seed=5)
edges = spanner(H, 4, 0)
print(f"spanner kept {len(edges)} of {H.m // 2} edges")

# unreachable vertices carry the shared sentinel
D = gen.er(50, 0.02, directed=True, seed=3)
print("unreachable from 0 in a sparse digraph:", int(np.count_nonzero(bfs(D, 0) == UNREACHED)))
