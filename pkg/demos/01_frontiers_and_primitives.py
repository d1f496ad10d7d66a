"""Frontiers, edge_map modes and deterministic batch atomics.

Run with ``python demos/01_frontiers_and_primitives.py``.
"""

import numpy as np

from pargraph import VertexSubset, edge_map, histogram, workers
from pargraph import generators as gen
from pargraph import primitives as P
from pargraph.frontier import TraversalStats

G = gen.rmat(scale=12, edge_factor=8, seed=1)
print(f"rmat graph: n={G.n}, m={G.m}")

# scan and filter
prefix, total = P.scan(np.arange(1, 6))
print("scan of 1..5:", prefix.tolist(), "total", total)
print("odd entries:", P.filter(np.arange(10), lambda x: x % 2 == 1).tolist())

# batch test-and-set: the first request on each clear cell wins
flags = np.zeros(4, dtype=np.int8)
print("test_and_set_batch([2, 2, 0, 2]) ->", P.test_and_set_batch(flags, np.array([2, 2, 0, 2])).tolist())

# one BFS step from vertex 0 in each traversal mode
for mode in ("sparse", "dense", "blocked"):
    visited = np.zeros(G.n, dtype=np.int8)
    visited[0] = 1
    stats = TraversalStats()
    out = edge_map(
        G,
        VertexSubset(G.n, ids=np.array([0])),
        lambda s, d, w: P.test_and_set_batch(visited, d),
        lambda ids: visited[ids] == 0,
        mode=mode,
        stats=stats,
    )
    print(f"{mode:>8}: {len(out.ids)} new vertices, {stats.edges_touched} edges touched")

# the same histogram comes out for any worker count
keys = np.random.default_rng(0).zipf(1.5, 100_000)
for k in (1, 3):
    with workers(k):
        hk, hv = histogram(keys)
    print(f"{k} worker(s): {hk.size} distinct keys, top count {hv.max()}")
