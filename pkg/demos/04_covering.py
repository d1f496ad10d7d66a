"""Independent sets, matchings, coloring and set cover."""

import numpy as np

from pargraph import generators as gen
from pargraph.algorithms import coloring, maximal_matching, mis, set_cover
from pargraph.graph import directed_graph

G = gen.rmat(scale=11, edge_factor=6, seed=4)

S = mis(G, 1)
print(f"maximal independent set: {S.size} vertices")

M = maximal_matching(G, 1)
print(f"maximal matching: {len(M.edges)} edges")

for h in ("LLF", "FIRST"):
    c = coloring(G, 1, h)
    print(f"{h} coloring: {np.unique(c).size} colors, max degree {G.degrees().max()}")

# sets are vertices 0..2, elements are 3..7; an edge s -> e means s contains e
cover_graph = directed_graph(8, [(0, 3), (0, 4), (0, 5), (1, 5), (1, 6), (2, 6), (2, 7), (1, 7)])
print("chosen sets:", sorted(set_cover(cover_graph, 0.01, 0).tolist()))
