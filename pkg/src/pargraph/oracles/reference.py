"""Sequential reference algorithms.

These are deliberately simple, single-threaded implementations built on
plain Python containers. They share no code with the parallel algorithms
beyond reading the input graph, and they return outputs in the same
canonical form as :mod:`pargraph.problems`.
"""

from __future__ import annotations

import heapq
import itertools
import math
from collections import deque

import numpy as np

from ..graph import Graph
from ..primitives import INF, NEG_INF

DENSEST_MAX_N = 18
SET_COVER_MAX_UNIVERSE = 20
SET_COVER_MAX_SETS = 24
BRUTE_TC_MAX_N = 500


class OracleRefusal(ValueError):
    """The instance exceeds the size guard of a brute-force oracle."""


def adjacency(G: Graph) -> list[list[int]]:
    return [G.neighbors(v).tolist() for v in range(G.n)]


def weighted_adjacency(G: Graph) -> list[list[tuple[int, int]]]:
    if not G.weighted:
        raise ValueError("graph has no weights")
    return [list(zip(G.neighbors(v).tolist(), G.edge_weights(v).tolist())) for v in range(G.n)]


def undirected_pairs(G: Graph) -> list[tuple[int, int]]:
    return [(u, v) for u in range(G.n) for v in G.neighbors(u).tolist() if u < v]


def _rows(pairs, width: int = 2) -> np.ndarray:
    out = np.array(sorted(pairs), dtype=np.int64)
    return out.reshape(-1, width)


class UnionFind:
    def __init__(self, n: int):
        self.parent = list(range(n))

    def find(self, x: int) -> int:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if ra > rb:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


def canonical_labels(labels) -> np.ndarray:
    """Relabel a partition so every class is named by its smallest member."""
    labels = np.asarray(labels)
    out = np.empty(labels.size, dtype=np.int64)
    first: dict = {}
    for v, lab in enumerate(labels.tolist()):
        out[v] = first.setdefault(lab, v)
    return out


# ---------------------------------------------------------------------------
# shortest-path family


def bfs(G: Graph, src: int) -> np.ndarray:
    adj = adjacency(G)
    dist = [INF] * G.n
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        for v in adj[u]:
            if dist[v] == INF:
                dist[v] = dist[u] + 1
                q.append(v)
    return np.array(dist, dtype=np.int64)


def dijkstra(G: Graph, src: int) -> np.ndarray:
    adj = weighted_adjacency(G)
    dist = [INF] * G.n
    dist[src] = 0
    heap = [(0, src)]
    while heap:
        d, u = heapq.heappop(heap)
        if d > dist[u]:
            continue
        for v, w in adj[u]:
            if d + w < dist[v]:
                dist[v] = d + w
                heapq.heappush(heap, (dist[v], v))
    return np.array(dist, dtype=np.int64)


def bellman_ford(G: Graph, src: int) -> np.ndarray:
    """Textbook Bellman-Ford; vertices reachable from a negative cycle get -inf."""
    adj = weighted_adjacency(G)
    n = G.n
    dist: list[float] = [math.inf] * n
    dist[src] = 0
    for _ in range(n - 1):
        changed = False
        for u in range(n):
            if dist[u] == math.inf:
                continue
            for v, w in adj[u]:
                if dist[u] + w < dist[v]:
                    dist[v] = dist[u] + w
                    changed = True
        if not changed:
            break
    bad = deque(
        v for u in range(n) if dist[u] != math.inf for v, w in adj[u] if dist[u] + w < dist[v]
    )
    neg = [False] * n
    while bad:
        v = bad.popleft()
        if neg[v]:
            continue
        neg[v] = True
        bad.extend(x for x, _ in adj[v] if not neg[x])
    out = [NEG_INF if neg[v] else (INF if dist[v] == math.inf else int(dist[v])) for v in range(n)]
    return np.array(out, dtype=np.int64)


def widest_path(G: Graph, src: int) -> np.ndarray:
    """Max-min Dijkstra. The source and unreachable vertices report INF."""
    adj = weighted_adjacency(G)
    width = [0] * G.n
    width[src] = INF
    heap = [(-INF, src)]
    while heap:
        negw, u = heapq.heappop(heap)
        if -negw < width[u]:
            continue
        for v, w in adj[u]:
            cand = min(-negw, w)
            if cand > width[v]:
                width[v] = cand
                heapq.heappush(heap, (-cand, v))
    return np.array([INF if x == 0 else x for x in width], dtype=np.int64)


def betweenness(G: Graph, src: int) -> np.ndarray:
    """Brandes single-source dependencies."""
    adj = adjacency(G)
    n = G.n
    sigma = [0.0] * n
    dist = [-1] * n
    sigma[src], dist[src] = 1.0, 0
    order = []
    q = deque([src])
    while q:
        u = q.popleft()
        order.append(u)
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
            if dist[v] == dist[u] + 1:
                sigma[v] += sigma[u]
    delta = [0.0] * n
    for w in reversed(order):
        for v in adj[w]:
            if dist[v] == dist[w] + 1:
                delta[w] += sigma[w] / sigma[v] * (1.0 + delta[v])
    delta[src] = 0.0
    return np.array(delta, dtype=np.float64)


def greedy_spanner(G: Graph, k: int) -> np.ndarray:
    """Greedy (2k-1)-spanner: keep an edge when its endpoints are farther apart in H."""
    limit = 2 * k - 1
    H: list[list[int]] = [[] for _ in range(G.n)]
    kept = []
    for u, v in undirected_pairs(G):
        seen = {u: 0}
        q = deque([u])
        found = False
        while q and not found:
            x = q.popleft()
            if seen[x] == limit:
                continue
            for y in H[x]:
                if y not in seen:
                    seen[y] = seen[x] + 1
                    if y == v:
                        found = True
                        break
                    q.append(y)
        if not found:
            H[u].append(v)
            H[v].append(u)
            kept.append((u, v))
    return _rows(kept)


# ---------------------------------------------------------------------------
# connectivity family


def shifted_clusters(G: Graph, shifts) -> np.ndarray:
    """Assign each vertex to the center minimizing ``dist(center, v) - shift[center]``."""
    adj = adjacency(G)
    n = G.n
    best = [math.inf] * n
    center = [-1] * n
    heap = [(-float(shifts[v]), v, v) for v in range(n)]
    heapq.heapify(heap)
    while heap:
        d, c, u = heapq.heappop(heap)
        if center[u] >= 0:
            continue
        center[u], best[u] = c, d
        for v in adj[u]:
            if center[v] < 0 and d + 1 < best[v]:
                best[v] = d + 1
                heapq.heappush(heap, (d + 1, c, v))
    return np.array(center, dtype=np.int64)


def components(G: Graph) -> np.ndarray:
    uf = UnionFind(G.n)
    for u, v in undirected_pairs(G):
        uf.union(u, v)
    return np.array([uf.find(v) for v in range(G.n)], dtype=np.int64)


def spanning_forest(G: Graph) -> np.ndarray:
    uf = UnionFind(G.n)
    return _rows([(u, v) for u, v in undirected_pairs(G) if uf.union(u, v)])


def kruskal(G: Graph) -> np.ndarray:
    """Rows ``(u, v, w)``; ties broken by ``(u, v)``."""
    adj = weighted_adjacency(G)
    edges = sorted((w, u, v) for u in range(G.n) for v, w in adj[u] if u < v)
    uf = UnionFind(G.n)
    return _rows([(u, v, w) for w, u, v in edges if uf.union(u, v)], 3)


def biconnected_edge_labels(G: Graph) -> np.ndarray:
    """Hopcroft-Tarjan with an explicit stack; one label per undirected edge.

    Edges follow the order of :func:`undirected_pairs`; each label is the
    index of the smallest edge in its block.
    """
    adj = adjacency(G)
    n = G.n
    pairs = undirected_pairs(G)
    eid = {p: i for i, p in enumerate(pairs)}
    label = [-1] * len(pairs)
    disc = [-1] * n
    low = [0] * n
    timer = 0
    estack: list[int] = []
    for root in range(n):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            u, parent, it = stack[-1]
            advanced = False
            for v in it:
                e = eid[(min(u, v), max(u, v))]
                if disc[v] < 0:
                    estack.append(e)
                    disc[v] = low[v] = timer
                    timer += 1
                    stack.append((v, u, iter(adj[v])))
                    advanced = True
                    break
                if v != parent and disc[v] < disc[u]:
                    estack.append(e)
                    low[u] = min(low[u], disc[v])
            if advanced:
                continue
            stack.pop()
            if parent >= 0:
                low[parent] = min(low[parent], low[u])
                if low[u] >= disc[parent]:
                    block = []
                    e_top = eid[(min(u, parent), max(u, parent))]
                    while True:
                        e = estack.pop()
                        block.append(e)
                        if e == e_top:
                            break
                    lab = min(block)
                    for e in block:
                        label[e] = lab
    return np.array(label, dtype=np.int64)


def tarjan_scc(G: Graph) -> np.ndarray:
    """Iterative Tarjan; labels name each component by its smallest vertex."""
    adj = adjacency(G)
    n = G.n
    index = [-1] * n
    low = [0] * n
    on = [False] * n
    comp = [-1] * n
    st: list[int] = []
    counter = 0
    for s in range(n):
        if index[s] >= 0:
            continue
        work = [(s, 0)]
        while work:
            v, i = work.pop()
            if i == 0:
                index[v] = low[v] = counter
                counter += 1
                st.append(v)
                on[v] = True
            recurse = False
            nbrs = adj[v]
            while i < len(nbrs):
                w = nbrs[i]
                i += 1
                if index[w] < 0:
                    work.append((v, i))
                    work.append((w, 0))
                    recurse = True
                    break
                if on[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                members = []
                while True:
                    w = st.pop()
                    on[w] = False
                    members.append(w)
                    if w == v:
                        break
                lab = min(members)
                for w in members:
                    comp[w] = lab
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
    return np.array(comp, dtype=np.int64)


# ---------------------------------------------------------------------------
# covering family


def greedy_mis(G: Graph, order) -> np.ndarray:
    adj = adjacency(G)
    inset = [False] * G.n
    blocked = [False] * G.n
    for v in order:
        if not blocked[v]:
            inset[v] = True
            for u in adj[v]:
                blocked[u] = True
            blocked[v] = True
    return np.array(inset, dtype=bool)


def greedy_matching(G: Graph, edge_order) -> np.ndarray:
    """Greedy matching over ``undirected_pairs`` visited in ``edge_order``."""
    pairs = undirected_pairs(G)
    used = [False] * G.n
    out = []
    for i in edge_order:
        u, v = pairs[i]
        if not used[u] and not used[v]:
            used[u] = used[v] = True
            out.append((u, v))
    return _rows(out)


def greedy_coloring(G: Graph, order) -> np.ndarray:
    adj = adjacency(G)
    color = [-1] * G.n
    for v in order:
        taken = {color[u] for u in adj[v]}
        c = 0
        while c in taken:
            c += 1
        color[v] = c
    return np.array(color, dtype=np.int64)


def llf_order(G: Graph, perm) -> list[int]:
    """Vertices by decreasing ceil(log2(deg+1)), ties by position in ``perm``."""
    pos = {v: i for i, v in enumerate(perm)}
    key = [math.ceil(math.log2(G.degree(v) + 1)) for v in range(G.n)]
    return sorted(range(G.n), key=lambda v: (-key[v], pos[v]))


def coverable(G: Graph) -> list[bool]:
    ok = [False] * G.n
    for u in range(G.n):
        for v in G.neighbors(u).tolist():
            ok[v] = True
    return ok


def greedy_set_cover(G: Graph, universe=None) -> np.ndarray:
    """Classic greedy: repeatedly take the set covering most uncovered elements."""
    adj = adjacency(G)
    need = coverable(G) if universe is None else [bool(x) for x in universe]
    ok = coverable(G)
    if any(need[v] and not ok[v] for v in range(G.n)):
        raise ValueError("an element belongs to no set")
    left = {v for v in range(G.n) if need[v]}
    chosen = []
    while left:
        s = max(range(G.n), key=lambda x: (sum(1 for e in adj[x] if e in left), -x))
        chosen.append(s)
        left.difference_update(adj[s])
    return np.array(sorted(chosen), dtype=np.int64)


def set_cover_opt(G: Graph, universe=None) -> int:
    """Minimum cover size by enumerating set combinations in increasing size."""
    adj = adjacency(G)
    need = coverable(G) if universe is None else [bool(x) for x in universe]
    elems = [v for v in range(G.n) if need[v]]
    if len(elems) > SET_COVER_MAX_UNIVERSE:
        raise OracleRefusal(f"universe of {len(elems)} exceeds {SET_COVER_MAX_UNIVERSE}")
    bit = {v: 1 << i for i, v in enumerate(elems)}
    masks = {}
    for s in range(G.n):
        m = 0
        for e in adj[s]:
            m |= bit.get(e, 0)
        if m:
            masks[m] = s
    sets = list(masks)
    if len(sets) > SET_COVER_MAX_SETS:
        raise OracleRefusal(f"{len(sets)} distinct sets exceed {SET_COVER_MAX_SETS}")
    full = (1 << len(elems)) - 1
    if full == 0:
        return 0
    for size in range(1, len(sets) + 1):
        for combo in itertools.combinations(sets, size):
            acc = 0
            for m in combo:
                acc |= m
            if acc == full:
                return size
    raise ValueError("an element belongs to no set")


# ---------------------------------------------------------------------------
# structure family


def matula_beck(G: Graph) -> tuple[np.ndarray, int]:
    """Coreness by repeatedly deleting a minimum-degree vertex; also returns k_max."""
    adj = adjacency(G)
    n = G.n
    deg = [len(a) for a in adj]
    maxd = max(deg, default=0)
    bins: list[set[int]] = [set() for _ in range(maxd + 1)]
    for v in range(n):
        bins[deg[v]].add(v)
    core = [0] * n
    removed = [False] * n
    k = 0
    d = 0
    for _ in range(n):
        d = 0 if d == 0 else d - 1
        while not bins[d]:
            d += 1
        v = min(bins[d])
        bins[d].discard(v)
        k = max(k, d)
        core[v] = k
        removed[v] = True
        for u in adj[v]:
            if not removed[u] and deg[u] > 0:
                bins[deg[u]].discard(u)
                deg[u] -= 1
                bins[deg[u]].add(u)
    return np.array(core, dtype=np.int64), k


def densest_brute(G: Graph) -> tuple[float, np.ndarray]:
    """Optimal density over all nonempty vertex subsets (``n`` at most 18)."""
    n = G.n
    if n > DENSEST_MAX_N:
        raise OracleRefusal(f"n={n} exceeds {DENSEST_MAX_N}")
    if n == 0:
        return 0.0, np.empty(0, dtype=np.int64)
    masks = np.arange(1, 1 << n, dtype=np.int64)
    count = np.zeros(masks.size, dtype=np.int64)
    for u, v in undirected_pairs(G):
        count += ((masks >> u) & (masks >> v) & 1).astype(np.int64)
    size = np.zeros(masks.size, dtype=np.int64)
    for v in range(n):
        size += (masks >> v) & 1
    dens = count / size
    best = int(np.argmax(dens))
    members = np.array([v for v in range(n) if (int(masks[best]) >> v) & 1], dtype=np.int64)
    return float(dens[best]), members


def triangles_brute(G: Graph) -> int:
    """Trace of the cubed adjacency matrix over six."""
    n = G.n
    if n > BRUTE_TC_MAX_N:
        raise OracleRefusal(f"n={n} exceeds {BRUTE_TC_MAX_N}")
    A = np.zeros((n, n), dtype=np.int64)
    for u, v in undirected_pairs(G):
        A[u, v] = A[v, u] = 1
    return int(np.trace(A @ A @ A)) // 6


def triangles_by_sets(G: Graph) -> int:
    """Edge iterator over Python sets; each triangle counted once via u < v < w."""
    nbrs = [set(a) for a in adjacency(G)]
    total = 0
    for u, v in undirected_pairs(G):
        total += sum(1 for w in nbrs[u] & nbrs[v] if w > v)
    return total


def power_iteration(G: Graph, gamma: float, eps: float, max_iters: int) -> tuple[np.ndarray, int]:
    """Sequential PageRank with uniform redistribution of dangling mass."""
    n = G.n
    if n == 0:
        return np.empty(0), 0
    adj = adjacency(G)
    deg = [len(a) for a in adj]
    p = [1.0 / n] * n
    it = 0
    while it < max_iters:
        acc = [0.0] * n
        dangling = 0.0
        for u in range(n):
            if deg[u] == 0:
                dangling += p[u]
                continue
            share = p[u] / deg[u]
            for v in adj[u]:
                acc[v] += share
        new = [(1.0 - gamma) / n + gamma * (acc[v] + dangling / n) for v in range(n)]
        delta = sum(abs(a - b) for a, b in zip(new, p))
        p = new
        it += 1
        if delta < eps:
            break
    return np.array(p), it
