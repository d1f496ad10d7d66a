"""Substructure and eigenvector family: k-core, approximate densest
subgraph, triangle counting and PageRank."""

from __future__ import annotations

from typing import NamedTuple

import numpy as np

from ..bucketing import make_buckets
from ..compression import c_intersect, encode
from ..graph import Graph
from ..histogram import histogram
from ..parallel import chunk_bounds, parallel_map

DEFAULT_DENSEST_EPS = 0.001
DEFAULT_GAMMA = 0.85
DEFAULT_PR_EPS = 1e-6
DEFAULT_PR_ITERS = 100
# wedges checked per vectorized chunk when counting triangles
WEDGE_CHUNK = 1 << 22
PAGERANK_BLOCK = 1 << 14


def _require_symmetric(G: Graph, what: str) -> None:
    if not G.symmetric:
        raise ValueError(f"{what} needs a symmetric graph")


# ---------------------------------------------------------------------------
# k-core


class Coreness(NamedTuple):
    coreness: np.ndarray
    rounds: int

    @property
    def k_max(self) -> int:
        return int(self.coreness.max()) if self.coreness.size else 0


def kcore(G: Graph) -> Coreness:
    """Coreness of every vertex by bucketed peeling.

    Each round removes the lowest non-empty bucket ``k``; the number of
    removed edges per surviving neighbor is aggregated with a histogram and
    the neighbor's degree drops to at least ``k``. ``rounds`` counts the
    bucket extractions.
    """
    _require_symmetric(G, "k-core")
    n = G.n
    D = G.degrees().astype(np.int64).copy()
    B = make_buckets(n, D, "increasing")
    core = np.zeros(n, dtype=np.int64)
    while (nxt := B.next_bucket()) is not None:
        k, U = nxt
        ids = U.ids
        core[ids] = k
        nb = G.gather(ids)
        alive = ~B.extracted[nb.dst]
        if not np.any(alive):
            continue
        v, cnt = histogram(nb.dst[alive])
        D[v] = np.maximum(D[v] - cnt, k)
        B.update(v, D[v])
    return Coreness(core, B.rounds)


# ---------------------------------------------------------------------------
# densest subgraph


class DensityResult(NamedTuple):
    vertices: np.ndarray
    density: float


def induced_density(G: Graph, members: np.ndarray) -> float:
    members = np.asarray(members, dtype=np.int64)
    if members.size == 0:
        return 0.0
    inside = np.zeros(G.n, dtype=bool)
    inside[members] = True
    b = G.undirected_edges()
    return float(np.count_nonzero(inside[b.src] & inside[b.dst])) / members.size


def densest_subgraph(G: Graph, epsilon: float = DEFAULT_DENSEST_EPS) -> DensityResult:
    """Peeling approximation of the densest subgraph.

    Every round removes all vertices whose induced degree is below
    ``2 (1 + eps)`` times the current density and remembers the densest
    candidate seen so far, the full vertex set included.
    """
    _require_symmetric(G, "densest subgraph")
    if epsilon < 0:
        raise ValueError("epsilon must be non-negative")
    n = G.n
    alive = np.ones(n, dtype=bool)
    deg = G.degrees().astype(np.int64).copy()
    edges = G.m // 2
    size = n
    best_density = 0.0
    best = np.empty(0, dtype=np.int64)
    while size > 0:
        rho = edges / size
        if rho > best_density:
            best_density = rho
            best = np.flatnonzero(alive)
        cand = np.flatnonzero(alive)
        R = cand[deg[cand] < 2.0 * (1.0 + epsilon) * rho]
        if R.size == 0:
            R = cand
        nb = G.gather(R)
        live = alive[nb.dst]
        removed_in = np.zeros(n, dtype=bool)
        removed_in[R] = True
        both = live & removed_in[nb.dst]
        # edges inside R are seen twice, edges leaving R once
        edges -= int(np.count_nonzero(live & ~removed_in[nb.dst])) + int(np.count_nonzero(both)) // 2
        alive[R] = False
        size -= R.size
        out = nb.dst[live & ~removed_in[nb.dst]]
        if out.size:
            v, cnt = histogram(out)
            deg[v] -= cnt
    return DensityResult(best, best_density)


# ---------------------------------------------------------------------------
# triangle counting


def orient(G: Graph) -> Graph:
    """Keep ``u -> v`` iff ``(deg u, u) < (deg v, v)``; neighbor lists stay sorted."""
    deg = G.degrees()
    b = G.edge_arrays()
    keep = (deg[b.src] < deg[b.dst]) | ((deg[b.src] == deg[b.dst]) & (b.src < b.dst))
    src, dst = b.src[keep], b.dst[keep]
    offsets = np.zeros(G.n + 1, dtype=np.int64)
    np.cumsum(np.bincount(src, minlength=G.n), out=offsets[1:])
    DG = Graph(offsets, dst, None, False, check=False)
    if G.compressed:
        DG = DG.compress(G.store.block_size)
    return DG


def triangle_count(G: Graph) -> int:
    """Number of triangles, each counted once on the degree-oriented graph."""
    _require_symmetric(G, "triangle counting")
    DG = orient(G)
    if DG.compressed:
        return _count_compressed(DG)
    return _count_wedges(DG)


def _count_wedges(DG: Graph) -> int:
    n = DG.n
    src = DG.sources()
    dst = DG.edges
    keys = src * n + dst  # sorted, since lists are sorted
    deg = DG.degrees()
    # wedge (u, v, w) for every oriented u->v and v->w; closed when u->w exists
    work = deg[dst]
    cum = np.cumsum(work)
    cuts = np.searchsorted(cum, np.arange(WEDGE_CHUNK, int(cum[-1]) if cum.size else 0, WEDGE_CHUNK))
    bounds = list(zip(np.r_[0, cuts], np.r_[cuts, dst.size]))

    def chunk(bd) -> int:
        lo, hi = int(bd[0]), int(bd[1])
        if hi <= lo:
            return 0
        wb = DG.gather(dst[lo:hi])
        u = np.repeat(src[lo:hi], work[lo:hi])
        q = u * n + wb.dst
        pos = np.searchsorted(keys, q)
        pos = np.minimum(pos, keys.size - 1)
        return int(np.count_nonzero(keys[pos] == q))

    return int(sum(parallel_map(chunk, bounds)))


def _count_compressed(DG: Graph) -> int:
    lists = [DG.compressed_list(v) for v in range(DG.n)]
    src = DG.sources()
    dst = DG.edges

    def chunk(bd) -> int:
        lo, hi = bd
        return sum(c_intersect(lists[u], lists[v]) for u, v in zip(src[lo:hi].tolist(), dst[lo:hi].tolist()))

    return int(sum(parallel_map(chunk, chunk_bounds(dst.size, 4096))))


def triangle_count_from_lists(n: int, adj: list[np.ndarray]) -> int:
    """Triangle count for plain sorted out-lists via compressed intersections."""
    lists = [encode(v, adj[v]) for v in range(n)]
    return sum(c_intersect(lists[u], lists[v]) for u in range(n) for v in adj[u].tolist())


# ---------------------------------------------------------------------------
# PageRank


class PageRankResult(NamedTuple):
    ranks: np.ndarray
    iterations: int
    delta: float


def _fixed_sum(x: np.ndarray) -> float:
    """Sum in fixed blocks, then over block sums, independent of workers."""
    if x.size == 0:
        return 0.0
    parts = parallel_map(lambda b: float(np.sum(x[b[0]:b[1]])), chunk_bounds(x.size, PAGERANK_BLOCK))
    return float(np.sum(np.asarray(parts)))


def pagerank(
    G: Graph,
    gamma: float = DEFAULT_GAMMA,
    eps: float = DEFAULT_PR_EPS,
    max_iters: int = DEFAULT_PR_ITERS,
    *,
    fixed_iterations: int | None = None,
) -> PageRankResult:
    """Pull-based power iteration.

    ``P_v = (1 - gamma)/n + gamma * (sum over in-neighbors u of P_u/deg(u)
    + dangling/n)`` where ``dangling`` is the rank mass on vertices without
    out-edges. Iterates until the L1 change drops below ``eps`` or
    ``max_iters`` rounds ran (exactly ``fixed_iterations`` when given).
    Every sum uses fixed blocks, so results do not depend on the worker
    count.
    """
    if not 0.0 <= gamma <= 1.0:
        raise ValueError("gamma must lie in [0, 1]")
    n = G.n
    if n == 0:
        return PageRankResult(np.empty(0), 0, 0.0)
    T = G.transpose()
    outdeg = G.degrees().astype(np.float64)
    dangling = outdeg == 0
    inv = np.zeros(n, dtype=np.float64)
    inv[~dangling] = 1.0 / outdeg[~dangling]
    in_src = T.edges
    in_off = T.offsets
    blocks = chunk_bounds(n, PAGERANK_BLOCK)

    def pull(contrib: np.ndarray) -> np.ndarray:
        def block(bd):
            lo, hi = bd
            e0, e1 = in_off[lo], in_off[hi]
            vals = contrib[in_src[e0:e1]]
            sums = np.zeros(hi - lo, dtype=np.float64)
            starts = in_off[lo:hi] - e0
            nonempty = in_off[lo + 1:hi + 1] > in_off[lo:hi]
            if vals.size:
                # empty rows have zero-length segments, so reduce only at non-empty starts
                sums[nonempty] = np.add.reduceat(vals, starts[nonempty])
            return sums

        return np.concatenate(parallel_map(block, blocks))

    p = np.full(n, 1.0 / n)
    it = 0
    delta = np.inf
    limit = max_iters if fixed_iterations is None else fixed_iterations
    while it < limit:
        mass = _fixed_sum(p[dangling])
        new = (1.0 - gamma) / n + gamma * (pull(p * inv) + mass / n)
        delta = _fixed_sum(np.abs(new - p))
        p = new
        it += 1
        if fixed_iterations is None and delta < eps:
            break
    return PageRankResult(p, it, float(delta))
