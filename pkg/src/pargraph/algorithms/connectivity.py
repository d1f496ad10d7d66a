"""Decomposition and connectivity family: low-diameter decomposition,
connected components, spanning forests, biconnectivity, minimum spanning
forests and strongly connected components."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .._hashtable import ProbeTable
from ..frontier import VertexSubset, edge_map
from ..graph import Graph, build_csr, contract
from ..primitives import RandomSource, as_rng, test_and_set_batch

DEFAULT_BETA = 0.2
SCC_BATCH_BASE = 1.5
SCC_TRIM_ROUNDS = 3
MSF_FILTER_ROUNDS = 3


# ---------------------------------------------------------------------------
# low-diameter decomposition


def _ldd(G: Graph, beta: float, rng: RandomSource):
    """Exponential-shift clustering; returns ``(center, parent)``.

    Every vertex draws ``delta ~ Exp(beta)`` and, unless already claimed,
    starts its own search at round ``floor(delta_max - delta)``. Searches
    claim unvisited neighbors with test-and-set, one hop per round, and
    ``parent`` records the tree each cluster grows (``parent[c] == c`` at
    centers).
    """
    n = G.n
    center = np.full(n, -1, dtype=np.int64)
    parent = np.arange(n, dtype=np.int64)
    if n == 0:
        return center, parent
    shift = rng.exponential(n, beta)
    start = np.floor(shift.max() - shift).astype(np.int64)
    order = np.argsort(start, kind="stable")
    start_sorted = start[order]
    visited = np.zeros(n, dtype=np.int8)
    frontier = np.empty(0, dtype=np.int64)
    done = 0
    nxt = 0
    rnd = 0

    def claim(s, d, w):
        won = test_and_set_batch(visited, d)
        center[d[won]] = center[s[won]]
        parent[d[won]] = s[won]
        return won

    while done < n:
        hi = int(np.searchsorted(start_sorted, rnd, side="right"))
        if hi > nxt:
            ready = order[nxt:hi]
            nxt = hi
            ready = ready[visited[ready] == 0]
            visited[ready] = 1
            center[ready] = ready
            frontier = np.concatenate([frontier, ready])
            done += ready.size
        if frontier.size:
            out = edge_map(G, VertexSubset(n, ids=frontier), claim, lambda ids: visited[ids] == 0)
            frontier = out.ids
            done += frontier.size
        rnd += 1
    return center, parent


def ldd(G: Graph, beta: float = DEFAULT_BETA, rng: RandomSource | int | None = None) -> np.ndarray:
    """Cluster id (the cluster's center vertex) for every vertex."""
    if not 0 < beta < 1:
        raise ValueError("beta must lie in (0, 1)")
    return _ldd(G, beta, as_rng(rng))[0]


def ldd_forest(G: Graph, beta: float, rng: RandomSource | int | None = None):
    """Clusters together with the BFS tree that grew them (``parent[c] == c`` at centers)."""
    return _ldd(G, beta, as_rng(rng))


# ---------------------------------------------------------------------------
# connectivity and spanning forest


def _require_symmetric(G: Graph, what: str) -> None:
    if not G.symmetric:
        raise ValueError(f"{what} needs a symmetric graph")


def connectivity(G: Graph, beta: float = DEFAULT_BETA, rng: RandomSource | int | None = None) -> np.ndarray:
    """Component label per vertex: decompose, contract clusters, recurse."""
    _require_symmetric(G, "connectivity")
    rng = as_rng(rng)
    return _components(G, beta, rng)


def _components(G: Graph, beta: float, rng: RandomSource) -> np.ndarray:
    if G.m == 0:
        return np.arange(G.n, dtype=np.int64)
    labels = _ldd(G, beta, rng)[0]
    con = contract(G, labels)
    if con.graph.m == 0:
        return labels
    sub = _components(con.graph, beta, rng)
    out = labels.copy()
    inside = con.cluster_of_vertex >= 0
    out[inside] = con.cluster_ids[sub[con.cluster_of_vertex[inside]]]
    return out


def spanning_forest(G: Graph, beta: float = DEFAULT_BETA, rng: RandomSource | int | None = None) -> np.ndarray:
    """Forest edges as sorted ``(u, v)`` rows with ``u < v``.

    Each level keeps its decomposition's tree edges; edges of contracted
    graphs are mapped back to the original edge that realized them.
    """
    _require_symmetric(G, "spanning forest")
    rng = as_rng(rng)
    b = G.edge_arrays()
    picked = _forest_edges(G, b.src, b.dst, beta, rng)
    if not picked:
        return np.empty((0, 2), dtype=np.int64)
    e = np.concatenate(picked)
    return np.unique(e, axis=0).reshape(-1, 2)


def _forest_edges(G: Graph, orig_u: np.ndarray, orig_v: np.ndarray, beta: float, rng: RandomSource) -> list[np.ndarray]:
    if G.m == 0:
        return []
    labels, parent = _ldd(G, beta, rng)
    child = np.flatnonzero(parent != np.arange(G.n))
    # CSR position of every tree edge (parent -> child); lists are sorted
    keys = G.sources() * G.n + G.edges
    pos = np.searchsorted(keys, parent[child] * G.n + child)
    u, v = orig_u[pos], orig_v[pos]
    picked = [np.stack([np.minimum(u, v), np.maximum(u, v)], axis=1)]
    con = contract(G, labels)
    if con.graph.m:
        picked += _forest_edges(con.graph, orig_u[con.witness], orig_v[con.witness], beta, rng)
    return picked


# ---------------------------------------------------------------------------
# biconnectivity


class TreeMetrics(NamedTuple):
    preorder: np.ndarray
    low: np.ndarray
    high: np.ndarray
    size: np.ndarray
    depth: np.ndarray


def _depths(parent: np.ndarray) -> np.ndarray:
    n = parent.size
    root = parent == np.arange(n)
    dist = (~root).astype(np.int64)
    anc = parent.copy()
    for _ in range(max(1, n).bit_length() + 1):
        dist = dist + dist[anc]
        anc = anc[anc]
    if np.any(~root[anc]):
        raise ValueError("parent array contains a cycle")
    return dist


def tree_metrics(parent, G: Graph) -> TreeMetrics:
    """Preorder numbers, subtree sizes and Low/High over a rooted forest.

    Children are visited in increasing id order and roots in increasing id
    order. ``low``/``high`` are the min/max preorder number over the
    subtree's own vertices and the far endpoints of its non-tree edges.
    """
    parent = np.asarray(parent, dtype=np.int64)
    n = G.n
    if parent.size != n:
        raise ValueError("one parent per vertex is required")
    if n and (parent.min() < 0 or parent.max() >= n):
        raise ValueError("parent id out of range")
    depth = _depths(parent)
    ids = np.arange(n, dtype=np.int64)
    nonroot = parent != ids
    by_depth = np.argsort(-depth, kind="stable")
    dsorted = depth[by_depth]
    cuts = np.flatnonzero(np.diff(dsorted)) + 1
    levels = np.split(by_depth, cuts) if n else []

    # leaffix: subtree sizes
    size = np.ones(n, dtype=np.int64)
    for lvl in levels:
        lvl = lvl[nonroot[lvl]]
        np.add.at(size, parent[lvl], size[lvl])

    # rootfix: preorder numbers, children ordered by id
    kids = ids[nonroot]
    order = np.lexsort((kids, parent[kids]))
    kids = kids[order]
    kp = parent[kids]
    ks = size[kids]
    excl = np.cumsum(ks) - ks
    gstart = np.flatnonzero(np.r_[True, kp[1:] != kp[:-1]]) if kids.size else np.empty(0, np.int64)
    glen = np.diff(np.r_[gstart, kids.size])
    offset = np.zeros(n, dtype=np.int64)
    offset[kids] = excl - np.repeat(excl[gstart], glen)
    roots = ids[~nonroot]
    rsz = size[roots]
    pre = np.zeros(n, dtype=np.int64)
    pre[roots] = np.cumsum(rsz) - rsz
    for lvl in reversed(levels):
        lvl = lvl[nonroot[lvl]]
        pre[lvl] = pre[parent[lvl]] + 1 + offset[lvl]

    # own contribution: self plus non-tree neighbors
    b = G.edge_arrays()
    tree_edge = (parent[b.dst] == b.src) | (parent[b.src] == b.dst)
    s, t = b.src[~tree_edge], b.dst[~tree_edge]
    low = pre.copy()
    high = pre.copy()
    np.minimum.at(low, s, pre[t])
    np.maximum.at(high, s, pre[t])
    for lvl in levels:
        lvl = lvl[nonroot[lvl]]
        np.minimum.at(low, parent[lvl], low[lvl])
        np.maximum.at(high, parent[lvl], high[lvl])
    return TreeMetrics(pre, low, high, size, depth)


@dataclass(frozen=True)
class EdgeLabelOracle:
    """Implicit biconnected-component labels for edges.

    ``labels`` are vertex components after deleting critical edges; a tree
    edge takes the label of its child endpoint, any other edge the label of
    either endpoint.
    """

    labels: np.ndarray
    parent: np.ndarray

    def label(self, u: int, v: int) -> int:
        if self.parent[v] == u and u != v:
            return int(self.labels[v])
        return int(self.labels[u])

    def label_edges(self, us, vs) -> np.ndarray:
        us = np.asarray(us, dtype=np.int64)
        vs = np.asarray(vs, dtype=np.int64)
        v_child = (self.parent[vs] == us) & (us != vs)
        return np.where(v_child, self.labels[vs], self.labels[us])


def biconnectivity(G: Graph, beta: float = DEFAULT_BETA, rng: RandomSource | int | None = None) -> EdgeLabelOracle:
    """Tarjan-Vishkin labels over a BFS forest rooted at one vertex per component."""
    _require_symmetric(G, "biconnectivity")
    rng = as_rng(rng)
    n = G.n
    comp = connectivity(G, beta, rng)
    # smallest vertex of each component is its root
    first = np.full(n, n, dtype=np.int64)
    np.minimum.at(first, comp, np.arange(n))
    roots = np.unique(first[comp])
    parent = np.arange(n, dtype=np.int64)
    visited = np.zeros(n, dtype=np.int8)
    visited[roots] = 1

    def claim(s, d, w):
        won = test_and_set_batch(visited, d)
        parent[d[won]] = s[won]
        return won

    frontier = VertexSubset(n, ids=roots)
    while not frontier.is_empty():
        frontier = edge_map(G, frontier, claim, lambda ids: visited[ids] == 0)

    tm = tree_metrics(parent, G)
    u = np.flatnonzero(parent != np.arange(n))
    p = parent[u]
    critical_child = u[(tm.preorder[p] <= tm.low[u]) & (tm.high[u] < tm.preorder[p] + tm.size[p])]
    is_crit = np.zeros(n, dtype=bool)
    is_crit[critical_child] = True
    b = G.edge_arrays()
    drop = (is_crit[b.dst] & (parent[b.dst] == b.src)) | (is_crit[b.src] & (parent[b.src] == b.dst))
    H = build_csr(n, b.src[~drop], b.dst[~drop], symmetric=True)
    labels = _components(H, beta, rng)
    return EdgeLabelOracle(labels, parent)


# ---------------------------------------------------------------------------
# minimum spanning forest


class ForestEdges(NamedTuple):
    """Undirected forest edges (``u < v``) with their weights."""

    u: np.ndarray
    v: np.ndarray
    w: np.ndarray

    @property
    def total_weight(self) -> int:
        return int(self.w.sum())

    def pairs(self) -> np.ndarray:
        return np.stack([self.u, self.v], axis=1)


def _jump(parent: np.ndarray) -> np.ndarray:
    while True:
        nxt = parent[parent]
        if np.array_equal(nxt, parent):
            return parent
        parent = nxt


def _boruvka(eu: np.ndarray, ev: np.ndarray, rank: np.ndarray, comp: np.ndarray) -> list[np.ndarray]:
    """Edge-list Borůvka with pointer jumping.

    ``eu``/``ev`` hold edge endpoints, ``rank`` a strict total order on
    edges. ``comp`` maps every vertex to its component root and is updated
    in place; the chosen edge indices are returned.
    """
    chosen: list[np.ndarray] = []
    idx = np.arange(eu.size, dtype=np.int64)
    cu, cv = comp[eu], comp[ev]
    live = cu != cv
    idx, cu, cv = idx[live], cu[live], cv[live]
    big = np.iinfo(np.int64).max
    while idx.size:
        best = np.full(comp.size, big, dtype=np.int64)
        r = rank[idx]
        np.minimum.at(best, cu, r)
        np.minimum.at(best, cv, r)
        # which edge won at each endpoint
        win_u = best[cu] == r
        win_v = best[cv] == r
        winner = win_u | win_v
        chosen.append(idx[winner])
        hook = np.arange(comp.size, dtype=np.int64)
        # every vertex hooks onto the far endpoint of its lightest edge
        hook[cu[win_u]] = cv[win_u]
        hook[cv[win_v]] = cu[win_v]
        # mutual picks: the higher endpoint becomes the root
        mutual = win_u & win_v
        hi = np.maximum(cu[mutual], cv[mutual])
        lo = np.minimum(cu[mutual], cv[mutual])
        hook[hi] = hi
        hook[lo] = hi
        hook = _jump(hook)
        comp[:] = hook[comp]
        cu, cv = hook[cu], hook[cv]
        live = cu != cv
        idx, cu, cv = idx[live], cu[live], cv[live]
    return chosen


def _lightest(rank: np.ndarray, target: int, rng: RandomSource) -> np.ndarray:
    """Mask of roughly the ``target`` smallest ranks, via a sampled threshold."""
    total = rank.size
    if total <= target:
        return np.ones(total, dtype=bool)
    s = min(total, max(64, 4 * int(math.isqrt(total))))
    sample = np.sort(rank[rng.integers(s, 0, total)])
    q = min(s - 1, max(0, int(s * target / total)))
    thr = sample[q]
    sel = rank <= thr
    cnt = int(sel.sum())
    # one refinement pass when the estimate misses by more than 2x
    if cnt > 2 * target:
        cand = rank[sel]
        s2 = min(cand.size, s)
        sample = np.sort(cand[rng.integers(s2, 0, cand.size)])
        thr = sample[min(s2 - 1, int(s2 * target / cand.size))]
        sel = rank <= thr
    elif cnt < target // 2:
        rest = rank[~sel]
        s2 = min(rest.size, s)
        sample = np.sort(rest[rng.integers(s2, 0, rest.size)])
        thr = sample[min(s2 - 1, int(s2 * (target - cnt) / rest.size))]
        sel = rank <= thr
    return sel


def msf(G: Graph, rng: RandomSource | int | None = None) -> ForestEdges:
    """Minimum spanning forest by filtered Borůvka.

    A few filtering rounds run Borůvka on roughly the ``3n/2`` lightest
    remaining edges and then drop every edge whose endpoints already share
    a component; a final Borůvka pass handles what is left. Ties in weight
    are broken by edge position, so the result is a valid MSF in all cases
    and the unique one when weights are distinct.
    """
    _require_symmetric(G, "minimum spanning forest")
    if G.weights is None:
        raise ValueError("minimum spanning forest needs an edge-weighted graph")
    rng = as_rng(rng)
    e = G.undirected_edges()
    eu, ev, ew = e.src, e.dst, e.w
    m = eu.size
    order = np.lexsort((np.arange(m), ew))
    rank = np.empty(m, dtype=np.int64)
    rank[order] = np.arange(m)
    comp = np.arange(G.n, dtype=np.int64)
    chosen: list[np.ndarray] = []
    remaining = np.arange(m, dtype=np.int64)
    target = max(1, (3 * G.n) // 2)
    for _ in range(MSF_FILTER_ROUNDS):
        if remaining.size <= target:
            break
        sel = _lightest(rank[remaining], target, rng)
        prefix = remaining[sel]
        for part in _boruvka(eu[prefix], ev[prefix], rank[prefix], comp):
            chosen.append(prefix[part])
        rest = remaining[~sel]
        remaining = rest[comp[eu[rest]] != comp[ev[rest]]]
    for part in _boruvka(eu[remaining], ev[remaining], rank[remaining], comp):
        chosen.append(remaining[part])
    pick = np.sort(np.concatenate(chosen)) if chosen else np.empty(0, dtype=np.int64)
    return ForestEdges(eu[pick], ev[pick], ew[pick])


# ---------------------------------------------------------------------------
# strongly connected components


class _Searches:
    """Simultaneous restricted searches recording (vertex, center) pairs."""

    def __init__(self, n: int, capacity: int):
        self.n = n
        self.table = ProbeTable(capacity, group=n)

    def run(self, G: Graph, centers: np.ndarray, sub: np.ndarray, done: np.ndarray) -> None:
        n = self.n
        pairs = centers * n + centers
        self.table.insert(pairs)
        new_v, new_c = centers, centers
        while new_v.size:
            order = np.argsort(new_v, kind="stable")
            new_v, new_c = new_v[order], new_c[order]
            frontier, start, count = np.unique(new_v, return_index=True, return_counts=True)
            got_v: list[np.ndarray] = []
            got_c: list[np.ndarray] = []

            def spread(s, d, w):
                # expand each edge once per center that reached its source this round
                k = np.searchsorted(frontier, s)
                reps = count[k]
                ce = np.repeat(np.arange(s.size), reps)
                cpos = np.repeat(start[k], reps) + (np.arange(ce.size) - np.repeat(np.cumsum(reps) - reps, reps))
                cc = new_c[cpos]
                dv = d[ce]
                ok = (~done[dv]) & (sub[dv] == sub[cc])
                ce, cc, dv = ce[ok], cc[ok], dv[ok]
                fresh = self.table.insert(dv * n + cc)
                got_v.append(dv[fresh])
                got_c.append(cc[fresh])
                hit = np.zeros(s.size, dtype=bool)
                hit[ce[fresh]] = True
                return hit

            edge_map(G, VertexSubset(n, ids=frontier), spread, mode="sparse")
            if got_v:
                new_v = np.concatenate(got_v)
                new_c = np.concatenate(got_c)
            else:
                new_v = new_c = np.empty(0, dtype=np.int64)

    def pairs(self) -> tuple[np.ndarray, np.ndarray]:
        keys, _ = self.table.items()
        keys = np.sort(keys)
        return keys // self.n, keys % self.n


def _trim(G: Graph, T: Graph, done: np.ndarray, label: np.ndarray, rounds: int) -> None:
    b = G.edge_arrays()
    for _ in range(rounds):
        live = ~done[b.src] & ~done[b.dst]
        outdeg = np.bincount(b.src[live], minlength=G.n)
        indeg = np.bincount(b.dst[live], minlength=G.n)
        trivial = ~done & ((outdeg == 0) | (indeg == 0))
        if not np.any(trivial):
            return
        label[trivial] = np.flatnonzero(trivial)
        done |= trivial


def _single_search(G: Graph, pivot: int, allowed: np.ndarray) -> np.ndarray:
    seen = np.zeros(G.n, dtype=np.int8)
    seen[pivot] = 1
    seen[~allowed] = 1
    frontier = VertexSubset.single(G.n, pivot)
    while not frontier.is_empty():
        frontier = edge_map(G, frontier, lambda s, d, w: test_and_set_batch(seen, d), lambda ids: seen[ids] == 0)
    reached = seen.astype(bool) & allowed
    reached[pivot] = True
    return reached


def scc(
    G: Graph,
    beta: float = SCC_BATCH_BASE,
    rng: RandomSource | int | None = None,
    *,
    trim_rounds: int = SCC_TRIM_ROUNDS,
) -> np.ndarray:
    """Strongly connected component label (a member vertex id) per vertex.

    Vertices are randomly ordered and processed in batches whose sizes grow
    geometrically by ``beta``. Each batch's unfinished vertices search
    forward and backward inside their current subproblem; pairs found in
    both directions close an SCC, labelled by its highest-priority center,
    and the remaining visited vertices move to the subproblem of the
    highest-priority search that reached them.
    """
    if beta <= 1:
        raise ValueError("batch growth base must exceed 1")
    rng = as_rng(rng)
    n = G.n
    T = G.transpose()
    done = np.zeros(n, dtype=bool)
    label = np.full(n, -1, dtype=np.int64)
    sub = np.zeros(n, dtype=np.int64)
    if n == 0:
        return label
    _trim(G, T, done, label, trim_rounds)
    perm = rng.permutation(n)
    prio = np.empty(n, dtype=np.int64)
    prio[perm] = np.arange(n)

    # first phase: one pivot, plain BFS both ways
    live = perm[~done[perm]]
    pos = 0
    if live.size:
        pivot = int(live[0])
        allowed = ~done
        fwd = _single_search(G, pivot, allowed)
        bwd = _single_search(T, pivot, allowed)
        both = fwd & bwd
        label[both] = pivot
        done |= both
        sub[fwd & ~both] = 1 + 2 * pivot
        sub[bwd & ~both] = 2 + 2 * pivot
        pos = int(prio[pivot]) + 1

    size = 1.0
    while pos < n:
        hi = min(n, pos + int(math.ceil(size)))
        batch = perm[pos:hi]
        pos = hi
        size *= beta
        centers = np.sort(batch[~done[batch]])
        if centers.size == 0:
            continue
        cap = 2 * centers.size
        fw = _Searches(n, cap)
        fw.run(G, centers, sub, done)
        bw = _Searches(n, cap)
        bw.run(T, centers, sub, done)
        fv, fc = fw.pairs()
        bv, bc = bw.pairs()
        in_b = bw.table.contains(fv * n + fc)
        # closed components: min-priority center wins the label
        iv, ic = fv[in_b], fc[in_b]
        best = np.full(n, n, dtype=np.int64)
        np.minimum.at(best, iv, prio[ic])
        closed = np.unique(iv)
        label[closed] = perm[best[closed]]
        done[closed] = True
        # remaining visited vertices: min (priority, direction) picks the subproblem
        in_f = fw.table.contains(bv * n + bc)
        sv = np.concatenate([fv[~in_b], bv[~in_f]])
        sc = np.concatenate([fc[~in_b], bc[~in_f]])
        sd = np.concatenate([np.zeros((~in_b).sum(), np.int64), np.ones((~in_f).sum(), np.int64)])
        keep = ~done[sv]
        sv, sc, sd = sv[keep], sc[keep], sd[keep]
        code = np.full(n, 2 * n + 2, dtype=np.int64)
        np.minimum.at(code, sv, 2 * prio[sc] + sd)
        moved = np.unique(sv)
        c = perm[code[moved] // 2]
        sub[moved] = 1 + 2 * c + code[moved] % 2
    return label
