"""Frontiers and the edge_map family of traversal operators.

Update functions are vectorized. ``F(src, dst, w)`` receives a batch of
edges and returns a boolean mask (or ``(mask, values)``) of edges whose
update succeeded; ``C(ids)`` returns a boolean mask of targets still worth
visiting. Batches are always presented in a fixed canonical order, so
batch atomics inside ``F`` resolve identically for any worker count.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .graph import EdgeBatch, Graph
from .parallel import parallel_map
from .primitives import first_occurrence

DENSE_THRESHOLD_DEN = 20
DEFAULT_BLOCK = 4096
# edges per batch in sparse mode; bounds peak memory on huge frontiers
SPARSE_BATCH = 1 << 22

UpdateFn = Callable[[np.ndarray, np.ndarray, "np.ndarray | None"], "np.ndarray | tuple[np.ndarray, np.ndarray]"]
CondFn = Callable[[np.ndarray], np.ndarray]


class VertexSubset:
    """A set of vertices stored as unique ids or as a boolean vector.

    An optional payload carries one value per member (per vertex when dense).
    """

    __slots__ = ("n", "_ids", "_mask", "_payload_sparse", "_payload_dense")

    def __init__(self, n: int, ids=None, mask=None, payload=None):
        self.n = int(n)
        self._ids = None if ids is None else np.asarray(ids, dtype=np.int64)
        self._mask = None if mask is None else np.asarray(mask, dtype=bool)
        if self._ids is None and self._mask is None:
            self._ids = np.empty(0, dtype=np.int64)
        self._payload_sparse = None
        self._payload_dense = None
        if payload is not None:
            if self._ids is not None:
                self._payload_sparse = np.asarray(payload)
            else:
                self._payload_dense = np.asarray(payload)

    @classmethod
    def empty(cls, n: int) -> "VertexSubset":
        return cls(n, ids=np.empty(0, dtype=np.int64))

    @classmethod
    def single(cls, n: int, v: int) -> "VertexSubset":
        return cls(n, ids=np.array([v], dtype=np.int64))

    @classmethod
    def all(cls, n: int) -> "VertexSubset":
        return cls(n, mask=np.ones(n, dtype=bool))

    @property
    def is_dense(self) -> bool:
        return self._ids is None

    @property
    def ids(self) -> np.ndarray:
        if self._ids is None:
            self._ids = np.flatnonzero(self._mask).astype(np.int64)
            if self._payload_dense is not None:
                self._payload_sparse = self._payload_dense[self._ids]
        return self._ids

    @property
    def mask(self) -> np.ndarray:
        if self._mask is None:
            m = np.zeros(self.n, dtype=bool)
            m[self._ids] = True
            self._mask = m
            if self._payload_sparse is not None:
                dense = np.zeros(self.n, dtype=self._payload_sparse.dtype)
                dense[self._ids] = self._payload_sparse
                self._payload_dense = dense
        return self._mask

    @property
    def payload(self) -> np.ndarray | None:
        """Payload aligned with :attr:`ids`."""
        ids = self.ids
        if self._payload_sparse is None and self._payload_dense is not None:
            self._payload_sparse = self._payload_dense[ids]
        return self._payload_sparse

    def __len__(self) -> int:
        return int(self._ids.size if self._ids is not None else np.count_nonzero(self._mask))

    @property
    def size(self) -> int:
        return len(self)

    def is_empty(self) -> bool:
        return len(self) == 0

    def members(self) -> np.ndarray:
        """Member ids in increasing order."""
        return np.sort(self.ids)

    def to_dense(self) -> "VertexSubset":
        self.mask
        return self

    def __contains__(self, v: int) -> bool:
        return bool(self.mask[v])

    def __repr__(self) -> str:
        rep = "dense" if self.is_dense else "sparse"
        return f"VertexSubset(n={self.n}, size={len(self)}, {rep})"


@dataclass
class TraversalStats:
    """Counters filled in by the edge_map family."""

    edges_touched: int = 0
    writes: int = 0
    blocks: int = 0
    modes: list[str] = field(default_factory=list)


def _as_subset(G: Graph, U) -> VertexSubset:
    if isinstance(U, VertexSubset):
        return U
    return VertexSubset(G.n, ids=np.asarray(U, dtype=np.int64))


def _apply(F: UpdateFn, batch: EdgeBatch):
    res = F(batch.src, batch.dst, batch.w)
    if isinstance(res, tuple):
        mask, vals = res
        return np.asarray(mask, dtype=bool), np.asarray(vals)
    return np.asarray(res, dtype=bool), None


def _filter_batch(batch: EdgeBatch, keep: np.ndarray) -> EdgeBatch:
    return EdgeBatch(
        batch.src[keep], batch.dst[keep], None if batch.w is None else batch.w[keep], batch.eid[keep]
    )


def _sparse_output(n: int, dst: np.ndarray, vals) -> VertexSubset:
    first = first_occurrence(dst)
    return VertexSubset(n, ids=dst[first], payload=None if vals is None else vals[first])


def _frontier_degree(G: Graph, U: VertexSubset) -> int:
    return int(G.degrees()[U.ids].sum())


def edge_map(
    G: Graph,
    U,
    F: UpdateFn,
    C: CondFn | None = None,
    *,
    direction: str = "out",
    mode: str = "auto",
    early_exit: bool = True,
    threshold_den: int = DENSE_THRESHOLD_DEN,
    block_size: int = DEFAULT_BLOCK,
    stats: TraversalStats | None = None,
) -> VertexSubset:
    """Apply ``F`` to edges leaving ``U`` whose target satisfies ``C``.

    Parameters
    ----------
    direction : ``"out"`` follows edges u -> v; ``"in"`` follows them backwards.
    mode : ``"auto"``, ``"sparse"``, ``"dense"`` or ``"blocked"``. Auto picks
        dense once ``|U| + sum deg(U)`` exceeds ``m / threshold_den``.
    early_exit : in dense mode, stop scanning a target's in-edges once ``C``
        turns false for it; otherwise every in-edge from ``U`` is applied.

    Returns
    -------
    VertexSubset of targets with at least one successful update.
    """
    H = G if direction == "out" else G.transpose()
    U = _as_subset(H, U)
    if mode == "auto":
        if len(U) == 0:
            return VertexSubset.empty(H.n)
        load = len(U) + _frontier_degree(H, U)
        mode = "dense" if load > H.m / threshold_den else "sparse"
    if stats is not None:
        stats.modes.append(mode)
    if mode == "sparse":
        return _edge_map_sparse(H, U, F, C, stats)
    if mode == "dense":
        return _edge_map_dense(H, U, F, C, early_exit, stats)
    if mode == "blocked":
        return edge_map_blocked(H, U, F, C, block_size=block_size, stats=stats)
    raise ValueError(f"unknown edge_map mode {mode!r}")


def _edge_map_sparse(G: Graph, U: VertexSubset, F, C, stats) -> VertexSubset:
    ids = U.ids
    deg = G.degrees()[ids]
    if stats is not None:
        stats.edges_touched += int(deg.sum())
        stats.writes += int(deg.sum())
    # split very large frontiers into consecutive vertex groups
    cum = np.cumsum(deg)
    cuts = np.searchsorted(cum, np.arange(SPARSE_BATCH, int(cum[-1]) if cum.size else 0, SPARSE_BATCH), side="right")
    groups = np.split(ids, cuts) if cuts.size else [ids]
    outs, vals_out = [], []
    for grp in groups:
        batch = G.gather(grp)
        if C is not None:
            batch = _filter_batch(batch, np.asarray(C(batch.dst), dtype=bool))
        mask, vals = _apply(F, batch)
        outs.append(batch.dst[mask])
        if vals is not None:
            vals_out.append(vals[mask])
    dst = np.concatenate(outs) if outs else np.empty(0, dtype=np.int64)
    vals = np.concatenate(vals_out) if vals_out else None
    return _sparse_output(G.n, dst, vals)


def _edge_map_dense(G: Graph, U: VertexSubset, F, C, early_exit: bool, stats) -> VertexSubset:
    T = G.transpose()
    inU = U.mask
    n = G.n
    targets = np.arange(n, dtype=np.int64)
    if C is not None:
        targets = targets[np.asarray(C(targets), dtype=bool)]
    out = np.zeros(n, dtype=bool)
    payload = None
    if C is None or not early_exit:
        batch = T.gather(targets)
        if stats is not None:
            stats.edges_touched += batch.src.size
        keep = inU[batch.dst]
        # in the transpose, src is the target and dst the frontier vertex
        mask, vals = _apply(F, EdgeBatch(batch.dst[keep], batch.src[keep], None if batch.w is None else batch.w[keep], batch.eid[keep]))
        hit = batch.src[keep][mask]
        out[hit] = True
        if vals is not None:
            payload = np.zeros(n, dtype=vals.dtype)
            first = first_occurrence(hit)
            payload[hit[first]] = vals[mask][first]
        if stats is not None:
            stats.writes += n
        return VertexSubset(n, mask=out, payload=payload)
    # early exit: scan in-lists in windows of doubling length, re-checking C
    deg = T.degrees()
    pos = np.zeros(n, dtype=np.int64)
    active = targets
    width = 1
    while active.size:
        lo = pos[active]
        hi = np.minimum(lo + width, deg[active])
        batch = T.gather_slices(active, lo, hi)
        pos[active] = hi
        if stats is not None:
            stats.edges_touched += batch.src.size
        keep = inU[batch.dst]
        mask, vals = _apply(F, EdgeBatch(batch.dst[keep], batch.src[keep], None if batch.w is None else batch.w[keep], batch.eid[keep]))
        hit = batch.src[keep][mask]
        if vals is not None:
            if payload is None:
                payload = np.zeros(n, dtype=vals.dtype)
            fresh = first_occurrence(hit) & ~out[hit]
            payload[hit[fresh]] = vals[mask][fresh]
        out[hit] = True
        active = active[pos[active] < deg[active]]
        if active.size:
            active = active[np.asarray(C(active), dtype=bool)]
        width *= 2
    if stats is not None:
        stats.writes += n
    return VertexSubset(n, mask=out, payload=payload)


def edge_map_blocked(
    G: Graph,
    U,
    F: UpdateFn,
    C: CondFn | None = None,
    *,
    block_size: int = DEFAULT_BLOCK,
    stats: TraversalStats | None = None,
) -> VertexSubset:
    """Sparse traversal over fixed-size blocks of the frontier's edges.

    The frontier's edges are split into ``ceil(sum deg / block_size)`` blocks;
    each block finds its first vertex by binary search over the degree
    prefix sums. Blocks are gathered in parallel, updates are applied in
    block order, and only live targets are written out, so the output costs
    one write per successful update.
    """
    U = _as_subset(G, U)
    ids = U.ids
    deg = G.degrees()[ids]
    prefix = np.zeros(ids.size + 1, dtype=np.int64)
    np.cumsum(deg, out=prefix[1:])
    total = int(prefix[-1])
    nblocks = -(-total // block_size)
    if stats is not None:
        stats.blocks += nblocks
        stats.edges_touched += total
    if nblocks == 0:
        return VertexSubset.empty(G.n)
    starts = np.arange(nblocks, dtype=np.int64) * block_size
    first_vertex = np.searchsorted(prefix, starts, side="right") - 1

    def gather_block(b: int) -> EdgeBatch:
        lo_e = int(starts[b])
        hi_e = min(lo_e + block_size, total)
        v0 = int(first_vertex[b])
        v1 = int(np.searchsorted(prefix, hi_e, side="left"))
        vs = ids[v0:v1]
        lo = np.maximum(lo_e - prefix[v0:v1], 0)
        hi = np.minimum(hi_e - prefix[v0:v1], deg[v0:v1])
        return G.gather_slices(vs, lo, hi)

    batches = parallel_map(gather_block, range(nblocks))
    outs, vals_out = [], []
    for batch in batches:
        if C is not None:
            batch = _filter_batch(batch, np.asarray(C(batch.dst), dtype=bool))
        mask, vals = _apply(F, batch)
        live = batch.dst[mask]
        outs.append(live)
        if vals is not None:
            vals_out.append(vals[mask])
        if stats is not None:
            stats.writes += live.size
    dst = np.concatenate(outs)
    vals = np.concatenate(vals_out) if vals_out else None
    return _sparse_output(G.n, dst, vals)


def vertex_map(U: VertexSubset, F: Callable[[np.ndarray], np.ndarray]) -> VertexSubset:
    """Members of ``U`` for which the vectorized predicate ``F`` holds."""
    ids = U.ids
    if ids.size == 0:
        return VertexSubset.empty(U.n)
    keep = np.asarray(F(ids), dtype=bool)
    payload = U.payload
    return VertexSubset(U.n, ids=ids[keep], payload=None if payload is None else payload[keep])
