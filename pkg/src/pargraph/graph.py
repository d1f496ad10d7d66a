"""Immutable CSR graphs: construction, transposition and cluster contraction."""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from . import compression as comp
from .compression import ranges


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class EdgeList:
    """Parallel arrays of (u, v[, w]) triples."""

    src: np.ndarray
    dst: np.ndarray
    weights: np.ndarray | None = None

    @classmethod
    def from_pairs(cls, pairs, weights=None) -> "EdgeList":
        arr = np.asarray(pairs, dtype=np.int64).reshape(-1, 2)
        w = None if weights is None else np.asarray(weights, dtype=np.int64)
        return cls(arr[:, 0].copy(), arr[:, 1].copy(), w)

    @classmethod
    def from_triples(cls, triples) -> "EdgeList":
        arr = np.asarray(triples, dtype=np.int64).reshape(-1, 3)
        return cls(arr[:, 0].copy(), arr[:, 1].copy(), arr[:, 2].copy())

    def __len__(self) -> int:
        return int(self.src.size)


class EdgeBatch(NamedTuple):
    """Edges gathered from a set of sources, in CSR order."""

    src: np.ndarray
    dst: np.ndarray
    w: np.ndarray | None
    eid: np.ndarray  # position in the CSR edge array


class Graph:
    """Immutable adjacency structure with sorted neighbor lists.

    Parameters
    ----------
    offsets : array of n + 1 edge-start indices.
    edges : neighbor ids, or None when ``store`` holds compressed lists.
    weights : optional signed integer weight per edge.
    symmetric : whether every edge appears in both directions.
    store : compressed adjacency replacing ``edges``.
    check : validate the CSR invariants.
    """

    def __init__(
        self,
        offsets,
        edges=None,
        weights=None,
        symmetric: bool = False,
        *,
        store: comp.CompressedAdjacency | None = None,
        check: bool = True,
    ):
        self.offsets = np.ascontiguousarray(offsets, dtype=np.int64)
        self.n = int(self.offsets.size - 1)
        if self.n < 0:
            raise GraphError("offsets must have at least one entry")
        self.m = int(self.offsets[-1])
        self._edges = None if edges is None else np.ascontiguousarray(edges, dtype=np.int64)
        self._store = store
        if (self._edges is None) == (store is None):
            raise GraphError("exactly one of edges and store must be given")
        self.weights = None if weights is None else np.ascontiguousarray(weights, dtype=np.int64)
        self.symmetric = bool(symmetric)
        self._degrees = np.diff(self.offsets)
        self._transpose: Graph | None = None
        for arr in (self.offsets, self._edges, self.weights):
            if arr is not None:
                arr.setflags(write=False)
        if check:
            self._validate()

    # -- invariants -------------------------------------------------------

    def _validate(self) -> None:
        off = self.offsets
        if off[0] != 0 or np.any(self._degrees < 0):
            raise GraphError("offsets must start at 0 and be non-decreasing")
        if self.weights is not None and self.weights.size != self.m:
            raise GraphError("weights must have one entry per edge")
        if self._edges is None:
            return
        e = self._edges
        if e.size != self.m:
            raise GraphError("offsets[n] must equal the number of edges")
        if e.size and (e.min() < 0 or e.max() >= self.n):
            raise GraphError("neighbor id out of range")
        src = self.sources()
        if np.any(e == src):
            raise GraphError("self loops are not allowed")
        inner = np.ones(e.size, dtype=bool)
        inner[off[:-1][self._degrees > 0]] = False
        if np.any(np.diff(e)[inner[1:]] <= 0):
            raise GraphError("neighbor lists must be sorted and duplicate free")
        if self.symmetric:
            key = src * self.n + e
            rkey = e * self.n + src
            pos = np.searchsorted(key, rkey)
            ok = (pos < key.size) & (key[np.minimum(pos, key.size - 1)] == rkey)
            if not np.all(ok):
                raise GraphError("symmetric graph is missing a reverse edge")
            if self.weights is not None and np.any(self.weights[pos] != self.weights):
                raise GraphError("reverse edges must carry equal weights")

    # -- basic accessors --------------------------------------------------

    @property
    def compressed(self) -> bool:
        return self._store is not None

    @property
    def weighted(self) -> bool:
        return self.weights is not None

    @property
    def store(self) -> comp.CompressedAdjacency | None:
        return self._store

    @property
    def edges(self) -> np.ndarray:
        """All neighbor ids in CSR order (decoded on demand when compressed)."""
        if self._edges is not None:
            return self._edges
        return comp.decode_slices(self._store, self._degrees, np.arange(self.n), 0 * self._degrees, self._degrees)

    def degrees(self) -> np.ndarray:
        return self._degrees

    def degree(self, v: int) -> int:
        return int(self._degrees[v])

    def sources(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self._degrees)

    def neighbors(self, v: int) -> np.ndarray:
        lo, hi = self.offsets[v], self.offsets[v + 1]
        if self._edges is not None:
            return self._edges[lo:hi]
        return comp.decode_slices(self._store, self._degrees, [v], [0], [hi - lo])

    def edge_weights(self, v: int) -> np.ndarray | None:
        if self.weights is None:
            return None
        return self.weights[self.offsets[v]:self.offsets[v + 1]]

    def compressed_list(self, v: int) -> comp.CompressedList:
        if self._store is None:
            return comp.encode(v, self.neighbors(v))
        return comp.adjacency_list(self._store, self._degrees, v)

    # -- batched edge access ----------------------------------------------

    def gather_slices(self, ids, lo, hi) -> EdgeBatch:
        """Edges at list positions ``[lo[i], hi[i])`` of each vertex ``ids[i]``."""
        ids = np.asarray(ids, dtype=np.int64)
        lo = np.asarray(lo, dtype=np.int64)
        hi = np.asarray(hi, dtype=np.int64)
        lens = np.maximum(hi - lo, 0)
        eid = ranges(self.offsets[ids] + lo, lens)
        src = np.repeat(ids, lens)
        if self._edges is not None:
            dst = self._edges[eid]
        else:
            dst = comp.decode_slices(self._store, self._degrees, ids, lo, hi)
        w = None if self.weights is None else self.weights[eid]
        return EdgeBatch(src, dst, w, eid)

    def gather(self, ids) -> EdgeBatch:
        """All out-edges of ``ids`` in the order given."""
        ids = np.asarray(ids, dtype=np.int64)
        return self.gather_slices(ids, np.zeros_like(ids), self._degrees[ids])

    def edge_arrays(self) -> EdgeBatch:
        return EdgeBatch(self.sources(), self.edges, self.weights, np.arange(self.m, dtype=np.int64))

    def edge_list(self) -> EdgeList:
        return EdgeList(self.sources(), self.edges.copy(), None if self.weights is None else self.weights.copy())

    def undirected_edges(self) -> EdgeBatch:
        """Each edge ``u < v`` of a symmetric graph once."""
        b = self.edge_arrays()
        keep = b.src < b.dst
        return EdgeBatch(b.src[keep], b.dst[keep], None if b.w is None else b.w[keep], b.eid[keep])

    # -- derived graphs ---------------------------------------------------

    def transpose(self) -> "Graph":
        if self.symmetric:
            return self
        if self._transpose is None:
            self._transpose = transpose(self)
        return self._transpose

    def in_graph(self) -> "Graph":
        """Graph whose out-lists are this graph's in-lists."""
        return self.transpose()

    def compress(self, block_size: int = comp.DEFAULT_BLOCK_SIZE) -> "Graph":
        if self._store is not None and self._store.block_size == block_size:
            return self
        store = comp.encode_adjacency(self.offsets, self.edges, block_size)
        return Graph(self.offsets, None, self.weights, self.symmetric, store=store, check=False)

    def decompress(self) -> "Graph":
        if self._store is None:
            return self
        return Graph(self.offsets, self.edges, self.weights, self.symmetric, check=False)

    def with_weights(self, weights) -> "Graph":
        if self._store is not None:
            return Graph(self.offsets, None, weights, self.symmetric, store=self._store)
        return Graph(self.offsets, self._edges, weights, self.symmetric)

    def unweighted(self) -> "Graph":
        if self.weights is None:
            return self
        if self._store is not None:
            return Graph(self.offsets, None, None, self.symmetric, store=self._store, check=False)
        return Graph(self.offsets, self._edges, None, self.symmetric, check=False)

    def same_as(self, other: "Graph") -> bool:
        """Equal vertex count, symmetry, edges and weights (ignores compression)."""
        if self.n != other.n or self.m != other.m or self.symmetric != other.symmetric:
            return False
        if not np.array_equal(self.offsets, other.offsets) or not np.array_equal(self.edges, other.edges):
            return False
        if (self.weights is None) != (other.weights is None):
            return False
        return self.weights is None or bool(np.array_equal(self.weights, other.weights))

    def __repr__(self) -> str:
        kind = "symmetric" if self.symmetric else "directed"
        extra = ", weighted" if self.weighted else ""
        extra += ", compressed" if self.compressed else ""
        return f"Graph(n={self.n}, m={self.m}, {kind}{extra})"


# ---------------------------------------------------------------------------
# construction


def _csr_from_sorted(n: int, src: np.ndarray) -> np.ndarray:
    counts = np.bincount(src, minlength=n) if src.size else np.zeros(n, dtype=np.int64)
    offsets = np.zeros(n + 1, dtype=np.int64)
    np.cumsum(counts, out=offsets[1:])
    return offsets


def build_csr(n: int, src, dst, weights=None, *, symmetrize: bool = False, symmetric: bool | None = None) -> Graph:
    """CSR graph from raw arrays, dropping self loops and duplicate pairs.

    Duplicate pairs keep their smallest weight. With ``symmetrize`` both
    directions of every edge are inserted.
    """
    src = np.asarray(src, dtype=np.int64).ravel()
    dst = np.asarray(dst, dtype=np.int64).ravel()
    if src.size != dst.size:
        raise GraphError("source and target arrays differ in length")
    w = None if weights is None else np.asarray(weights, dtype=np.int64).ravel()
    if w is not None and w.size != src.size:
        raise GraphError("weights differ in length from the edge list")
    if n < 0:
        raise GraphError("negative vertex count")
    if src.size and (min(src.min(), dst.min()) < 0 or max(src.max(), dst.max()) >= n):
        raise GraphError(f"edge endpoint outside [0, {n})")
    keep = src != dst
    src, dst = src[keep], dst[keep]
    if w is not None:
        w = w[keep]
    if symmetrize:
        src, dst = np.concatenate([src, dst]), np.concatenate([dst, src])
        if w is not None:
            w = np.concatenate([w, w])
    if w is None:
        key = np.unique(src * n + dst)
    else:
        order = np.lexsort((w, dst, src))
        key = src[order] * n + dst[order]
        first = np.r_[True, key[1:] != key[:-1]][: key.size]
        key, w = key[first], w[order][first]
    if n:
        src, dst = key // n, key % n
    else:
        src = dst = key
    sym = symmetrize if symmetric is None else symmetric
    return Graph(_csr_from_sorted(n, src), dst, w, sym)


def from_edge_list(edges: EdgeList, n: int, symmetrize: bool = False) -> Graph:
    """CSR graph from an :class:`EdgeList` over ``n`` vertices."""
    return build_csr(n, edges.src, edges.dst, edges.weights, symmetrize=symmetrize)


def transpose(G: Graph) -> Graph:
    """Reverse every edge, carrying weights."""
    b = G.edge_arrays()
    order = np.lexsort((b.src, b.dst))
    src, dst = b.dst[order], b.src[order]
    w = None if b.w is None else b.w[order]
    T = Graph(_csr_from_sorted(G.n, src), dst, w, G.symmetric, check=False)
    if G.compressed:
        T = T.compress(G.store.block_size)
    return T


class Contraction(NamedTuple):
    """Result of contracting clusters.

    ``graph`` has one vertex per cluster that touches an inter-cluster edge;
    ``cluster_of_vertex`` maps each original vertex to its contracted id or
    -1 for isolated clusters; ``cluster_ids`` lists the original label of
    each contracted vertex; ``witness`` holds, per contracted edge, the CSR
    index of one original edge joining the two clusters.
    """

    graph: Graph
    cluster_of_vertex: np.ndarray
    cluster_ids: np.ndarray
    witness: np.ndarray


def contract(G: Graph, labels) -> Contraction:
    labels = np.asarray(labels, dtype=np.int64)
    if labels.size != G.n:
        raise GraphError("one label per vertex is required")
    b = G.edge_arrays()
    lu, lv = labels[b.src], labels[b.dst]
    cross = lu != lv
    lu, lv, eid = lu[cross], lv[cross], b.eid[cross]
    if G.symmetric:
        live = np.unique(lu)
    else:
        live = np.unique(np.concatenate([lu, lv]))
    k = live.size
    cu = np.searchsorted(live, lu)
    cv = np.searchsorted(live, lv)
    key = cu * max(k, 1) + cv
    # smallest original edge index per cluster pair is the witness
    order = np.lexsort((eid, key))
    key, eid = key[order], eid[order]
    first = np.r_[True, key[1:] != key[:-1]] if key.size else np.zeros(0, dtype=bool)
    key, eid = key[first], eid[first]
    src = key // max(k, 1)
    dst = key % max(k, 1)
    H = Graph(_csr_from_sorted(k, src), dst, None, G.symmetric, check=False)
    mapping = np.full(G.n, -1, dtype=np.int64)
    pos = np.searchsorted(live, labels)
    hit = (pos < k) & (live[np.minimum(pos, max(k - 1, 0))] == labels) if k else np.zeros(G.n, bool)
    mapping[hit] = pos[hit]
    return Contraction(H, mapping, live, eid)


# ---------------------------------------------------------------------------
# small helpers used throughout the algorithms


def symmetric_graph(n: int, pairs, weights=None) -> Graph:
    el = EdgeList.from_pairs(pairs, weights)
    return build_csr(n, el.src, el.dst, el.weights, symmetrize=True)


def directed_graph(n: int, pairs, weights=None) -> Graph:
    el = EdgeList.from_pairs(pairs, weights)
    return build_csr(n, el.src, el.dst, el.weights, symmetrize=False)
