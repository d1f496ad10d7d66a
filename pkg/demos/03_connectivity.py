"""Decomposition, components, forests and biconnectivity."""

import numpy as np

from pargraph import generators as gen
from pargraph.algorithms import biconnectivity, connectivity, ldd, msf, scc, spanning_forest
from pargraph.graph import directed_graph, symmetric_graph

G = gen.er(3000, 0.0006, seed=7)

labels = ldd(G, 0.2, 1)
und = G.undirected_edges()
cut = np.count_nonzero(labels[und.src] != labels[und.dst])
print(f"low-diameter decomposition: {np.unique(labels).size} clusters, {cut} of {und.src.size} edges cut")

comp = connectivity(G, rng=1)
forest = spanning_forest(G, rng=1)
print(f"{np.unique(comp).size} components; spanning forest has {len(forest)} edges")

W = gen.add_weights(G, seed=1)
F = msf(W, 1)
print(f"minimum spanning forest: {len(F.u)} edges, total weight {F.total_weight}")

# two triangles joined by a bridge
B = symmetric_graph(6, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4), (4, 5), (5, 3)])
oracle = biconnectivity(B, rng=0)
for u, v in [(0, 1), (2, 3), (4, 5)]:
    print(f"edge ({u},{v}) -> biconnected label {oracle.label(u, v)}")

# strongly connected components of a directed cycle plus a tail
D = directed_graph(5, [(0, 1), (1, 2), (2, 0), (2, 3), (3, 4)])
print("scc labels:", scc(D, rng=0).tolist())
