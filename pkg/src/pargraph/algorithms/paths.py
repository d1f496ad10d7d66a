"""Traversal and shortest-path family: BFS, weighted BFS, Bellman-Ford,
widest path, single-source betweenness and low-stretch spanners."""

from __future__ import annotations

import math

import numpy as np

from ..bucketing import NULL_BUCKET, make_buckets
from ..frontier import VertexSubset, edge_map
from ..graph import Graph
from ..primitives import (
    INF,
    NEG_INF,
    RandomSource,
    as_rng,
    fetch_and_add_batch,
    priority_write_batch,
    test_and_set_batch,
)

UNREACHED = INF


def _check_source(G: Graph, src: int) -> int:
    src = int(src)
    if not 0 <= src < G.n:
        raise ValueError(f"source {src} outside [0, {G.n})")
    return src


def _require_weights(G: Graph) -> np.ndarray:
    if G.weights is None:
        raise ValueError("this problem needs an edge-weighted graph")
    return G.weights


def bfs(G: Graph, src: int, *, mode: str = "auto", return_parents: bool = False):
    """Unweighted distances from ``src``; unreachable vertices hold ``UNREACHED``."""
    src = _check_source(G, src)
    dist = np.full(G.n, UNREACHED, dtype=np.int64)
    parent = np.full(G.n, -1, dtype=np.int64)
    visited = np.zeros(G.n, dtype=np.int8)
    visited[src] = 1
    dist[src] = 0
    parent[src] = src
    frontier = VertexSubset.single(G.n, src)
    level = 0

    def update(s, d, w):
        won = test_and_set_batch(visited, d)
        dist[d[won]] = level + 1
        parent[d[won]] = s[won]
        return won

    def cond(ids):
        return visited[ids] == 0

    while not frontier.is_empty():
        frontier = edge_map(G, frontier, update, cond, mode=mode)
        level += 1
    return (dist, parent) if return_parents else dist


def weighted_bfs(G: Graph, src: int, *, mode: str = "auto") -> np.ndarray:
    """Shortest distances for integer weights >= 1, settled bucket by bucket."""
    src = _check_source(G, src)
    w = _require_weights(G)
    if w.size and w.min() < 1:
        raise ValueError("weighted BFS needs every weight >= 1")
    dist = np.full(G.n, UNREACHED, dtype=np.int64)
    dist[src] = 0
    keys = np.full(G.n, NULL_BUCKET, dtype=np.int64)
    keys[src] = 0
    B = make_buckets(G.n, keys, "increasing")

    def relax(s, d, wt):
        return priority_write_batch(dist, d, dist[s] + wt, "min")

    while (nxt := B.next_bucket()) is not None:
        _, frontier = nxt
        moved = edge_map(G, frontier, relax, mode=mode)
        ids = moved.ids
        B.update(ids, dist[ids])
    return dist


def bellman_ford(G: Graph, src: int, *, mode: str = "auto") -> np.ndarray:
    """Signed-weight distances; vertices reachable from a negative cycle get ``NEG_INF``.

    Frontier rounds stop after ``n`` rounds. If vertices were still relaxed in
    round ``n``, each of them lies downstream of a negative cycle, and every
    such cycle reachable from ``src`` contributes at least one of them, so a
    BFS from that frontier reaches exactly the unbounded vertices.
    """
    src = _check_source(G, src)
    _require_weights(G)
    dist = np.full(G.n, UNREACHED, dtype=np.int64)
    dist[src] = 0
    frontier = VertexSubset.single(G.n, src)

    def relax(s, d, wt):
        return priority_write_batch(dist, d, dist[s] + wt, "min")

    rounds = 0
    while not frontier.is_empty() and rounds < G.n:
        frontier = edge_map(G, frontier, relax, mode=mode)
        rounds += 1
    if not frontier.is_empty():
        seen = np.zeros(G.n, dtype=np.int8)
        seeds = frontier.ids
        seen[seeds] = 1
        cur = VertexSubset(G.n, ids=seeds)
        while not cur.is_empty():
            cur = edge_map(G, cur, lambda s, d, w: test_and_set_batch(seen, d), lambda ids: seen[ids] == 0)
        dist[seen.astype(bool)] = NEG_INF
    return dist


def widest_path(G: Graph, src: int, *, method: str = "bucketed", mode: str = "auto") -> np.ndarray:
    """Bottleneck widths from ``src`` under the (max, min) semiring.

    ``D[src]`` is ``INF`` (the empty path has unbounded width). Vertices that
    ``src`` cannot reach also report ``INF``, the shared unreached marker.

    Parameters
    ----------
    method : ``"bucketed"`` settles vertices in decreasing width order;
        ``"bellman_ford"`` runs frontier rounds until nothing changes.
    """
    src = _check_source(G, src)
    w = _require_weights(G)
    if w.size and w.min() < 1:
        raise ValueError("widest path needs positive weights")
    width = np.zeros(G.n, dtype=np.int64)  # 0 marks "no path yet"
    width[src] = INF

    def relax(s, d, wt):
        return priority_write_batch(width, d, np.minimum(width[s], wt), "max")

    if method == "bellman_ford":
        frontier = VertexSubset.single(G.n, src)
        while not frontier.is_empty():
            frontier = edge_map(G, frontier, relax, mode=mode)
    elif method == "bucketed":
        keys = np.full(G.n, NULL_BUCKET, dtype=np.int64)
        keys[src] = INF - 1
        B = make_buckets(G.n, keys, "decreasing")
        while (nxt := B.next_bucket()) is not None:
            _, frontier = nxt
            moved = edge_map(G, frontier, relax, mode=mode).ids
            B.update(moved, width[moved])
    else:
        raise ValueError(f"unknown widest-path method {method!r}")
    width[width == 0] = UNREACHED
    return width


def betweenness(G: Graph, src: int, *, mode: str = "auto") -> np.ndarray:
    """Single-source Brandes dependencies ``delta_src(v)`` (unnormalized)."""
    src = _check_source(G, src)
    n = G.n
    sigma = np.zeros(n, dtype=np.float64)
    sigma[src] = 1.0
    level = np.full(n, -1, dtype=np.int64)
    level[src] = 0
    visited = np.zeros(n, dtype=bool)
    visited[src] = True
    levels = [np.array([src], dtype=np.int64)]

    def count_paths(s, d, w):
        prior = fetch_and_add_batch(sigma, d, sigma[s])
        return prior == 0

    def fresh(ids):
        return ~visited[ids]

    frontier = VertexSubset.single(n, src)
    depth = 0
    while True:
        frontier = edge_map(G, frontier, count_paths, fresh, mode=mode, early_exit=False)
        if frontier.is_empty():
            break
        depth += 1
        ids = frontier.members()
        visited[ids] = True
        level[ids] = depth
        levels.append(ids)
        frontier = VertexSubset(n, ids=ids)

    delta = np.zeros(n, dtype=np.float64)
    for d in range(len(levels) - 2, -1, -1):
        batch = G.gather(levels[d])
        down = level[batch.dst] == d + 1
        s, t = batch.src[down], batch.dst[down]
        contrib = sigma[s] / sigma[t] * (1.0 + delta[t])
        delta += np.bincount(s, weights=contrib, minlength=n)
    delta[src] = 0.0
    return delta


def spanner(G: Graph, k: int, rng: RandomSource | int | None = None) -> np.ndarray:
    """Edges of an O(k)-stretch spanner as sorted ``(u, v)`` rows with ``u < v``.

    Clusters come from a low-diameter decomposition with ``beta = ln(n) / (2k)``;
    the result keeps every cluster tree edge plus the smallest edge between
    each pair of adjacent clusters.
    """
    from .connectivity import ldd_forest

    if k < 1:
        raise ValueError("k must be >= 1")
    if not G.symmetric:
        raise ValueError("spanner needs a symmetric graph")
    rng = as_rng(rng)
    if G.n <= 1 or G.m == 0:
        return np.empty((0, 2), dtype=np.int64)
    beta = math.log(G.n) / (2 * k)
    labels, parent = ldd_forest(G, beta, rng)
    child = np.flatnonzero(parent != np.arange(G.n))
    tree = np.stack([np.minimum(child, parent[child]), np.maximum(child, parent[child])], axis=1)
    e = G.undirected_edges()
    lu, lv = labels[e.src], labels[e.dst]
    cross = lu != lv
    a, b = np.minimum(lu, lv)[cross], np.maximum(lu, lv)[cross]
    key = a * G.n + b
    # undirected edges are already ordered by (u, v), so the first is the smallest
    _, first = np.unique(key, return_index=True)
    inter = np.stack([e.src[cross][first], e.dst[cross][first]], axis=1)
    out = np.concatenate([tree, inter])
    out = np.unique(out, axis=0)
    return out.reshape(-1, 2)
