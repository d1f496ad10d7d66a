"""Parallel-byte neighbor-list codec and primitives over compressed lists.

A sorted neighbor list of vertex ``src`` is split into blocks of
``block_size`` neighbors. Each block starts with the zigzag-coded difference
between its first neighbor and ``src``; every later entry is the (positive)
gap to its predecessor. Codes are 7-bit little-endian varints whose high bit
marks a continuation byte. A block offset table makes every block
independently decodable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .parallel import parallel_map

DEFAULT_BLOCK_SIZE = 128
# intersections over at most this many blocks run as a plain merge
INTERSECT_BASE_BLOCKS = 8

_U64 = np.uint64


class CompressionError(ValueError):
    pass


# ---------------------------------------------------------------------------
# varint and zigzag helpers


def zigzag(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.int64)
    return ((x << 1) ^ (x >> 63)).astype(np.uint64)


def unzigzag(z: np.ndarray) -> np.ndarray:
    z = np.asarray(z, dtype=np.uint64)
    return (z >> _U64(1)).astype(np.int64) ^ -(z & _U64(1)).astype(np.int64)


def varint_lengths(vals: np.ndarray) -> np.ndarray:
    vals = np.asarray(vals, dtype=np.uint64)
    lens = np.ones(vals.size, dtype=np.int64)
    for k in range(1, 10):
        lens += vals >= _U64(1 << (7 * k))
    return lens


def ranges(lo: np.ndarray, lens: np.ndarray) -> np.ndarray:
    """Concatenation of ``arange(lo[i], lo[i] + lens[i])`` for every i."""
    lens = np.asarray(lens, dtype=np.int64)
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    starts = np.cumsum(lens) - lens
    return np.repeat(np.asarray(lo, dtype=np.int64) - starts, lens) + np.arange(total, dtype=np.int64)


def varint_encode(vals: np.ndarray, lens: np.ndarray | None = None) -> np.ndarray:
    vals = np.asarray(vals, dtype=np.uint64)
    if lens is None:
        lens = varint_lengths(vals)
    total = int(lens.sum())
    if total == 0:
        return np.empty(0, dtype=np.uint8)
    starts = np.cumsum(lens) - lens
    j = np.arange(total, dtype=np.int64) - np.repeat(starts, lens)
    v = np.repeat(vals, lens)
    out = ((v >> (7 * j).astype(np.uint64)) & _U64(0x7F)).astype(np.uint8)
    out[j < np.repeat(lens, lens) - 1] |= 0x80
    return out


def varint_decode(data: np.ndarray) -> np.ndarray:
    data = np.asarray(data, dtype=np.uint8)
    if data.size == 0:
        return np.empty(0, dtype=np.uint64)
    if data[-1] & 0x80:
        raise CompressionError("truncated varint stream")
    ends = np.flatnonzero((data & 0x80) == 0)
    starts = np.r_[0, ends[:-1] + 1]
    j = np.arange(data.size, dtype=np.int64) - np.repeat(starts, ends - starts + 1)
    if j.max() > 9:
        raise CompressionError("varint longer than 10 bytes")
    payload = (data & 0x7F).astype(np.uint64) << (7 * j).astype(np.uint64)
    return np.add.reduceat(payload, starts)


def _decode_blocks(data, byte_lo, byte_hi, block_src, block_len) -> np.ndarray:
    """Decode a batch of blocks (not necessarily contiguous) into neighbor ids."""
    block_len = np.asarray(block_len, dtype=np.int64)
    total = int(block_len.sum())
    if total == 0:
        return np.empty(0, dtype=np.int64)
    raw = data[ranges(byte_lo, np.asarray(byte_hi) - np.asarray(byte_lo))]
    vals = varint_decode(raw)
    if vals.size != total:
        raise CompressionError("block byte ranges do not match block lengths")
    nz = block_len > 0
    code_start = (np.cumsum(block_len) - block_len)[nz]
    deltas = vals.astype(np.int64)
    deltas[code_start] = unzigzag(vals[code_start]) + np.asarray(block_src, dtype=np.int64)[nz]
    cs = np.cumsum(deltas)
    base = cs[code_start] - deltas[code_start]
    return cs - np.repeat(base, block_len[nz])


def _encode_codes(src_per_edge, nbrs, pos_in_list, block_size):
    nbrs = np.asarray(nbrs, dtype=np.int64)
    first = pos_in_list % block_size == 0
    prev = np.empty_like(nbrs)
    if nbrs.size:
        prev[1:] = nbrs[:-1]
        prev[0] = 0
    gaps = nbrs - prev
    codes = np.where(first, 0, gaps).astype(np.uint64)
    codes[first] = zigzag(nbrs[first] - np.asarray(src_per_edge, dtype=np.int64)[first])
    return codes, first, gaps


# ---------------------------------------------------------------------------
# single neighbor lists


@dataclass(frozen=True, eq=False)
class CompressedList:
    src: int
    length: int
    block_size: int
    block_offsets: np.ndarray  # byte offset of every block plus the end
    data: np.ndarray  # uint8 stream

    @property
    def num_blocks(self) -> int:
        return self.block_offsets.size - 1

    @property
    def nbytes(self) -> int:
        return int(self.data.size)

    def block_lengths(self) -> np.ndarray:
        k = self.block_size
        nb = self.num_blocks
        lens = np.full(nb, k, dtype=np.int64)
        if nb:
            lens[-1] = self.length - k * (nb - 1)
        return lens

    def decode_block(self, b: int) -> np.ndarray:
        lo, hi = self.block_offsets[b], self.block_offsets[b + 1]
        return _decode_blocks(self.data, [lo], [hi], [self.src], [self.block_lengths()[b]])

    def block_starts(self) -> np.ndarray:
        """First neighbor of every block, decoded without touching the rest."""
        nb = self.num_blocks
        if nb == 0:
            return np.empty(0, dtype=np.int64)
        window = self.block_offsets[:-1, None] + np.arange(10)[None, :]
        window = np.minimum(window, self.data.size - 1)
        raw = self.data[window]
        term = (raw & 0x80) == 0
        stop = term.argmax(axis=1)
        keep = np.arange(10)[None, :] <= stop[:, None]
        payload = (raw & 0x7F).astype(np.uint64) << (7 * np.arange(10, dtype=np.uint64))[None, :]
        z = np.where(keep, payload, _U64(0)).sum(axis=1, dtype=np.uint64)
        return unzigzag(z) + self.src


def encode(src: int, nbrs, block_size: int = DEFAULT_BLOCK_SIZE) -> CompressedList:
    """Compress a sorted, duplicate-free neighbor list of ``src``."""
    nbrs = np.asarray(nbrs, dtype=np.int64)
    if block_size < 1:
        raise CompressionError("block size must be positive")
    if nbrs.size:
        if np.any(np.diff(nbrs) <= 0):
            raise CompressionError("neighbor list must be strictly increasing")
        if nbrs[0] < 0:
            raise CompressionError("negative neighbor id")
        if np.any(nbrs == src):
            raise CompressionError("self loop in neighbor list")
    pos = np.arange(nbrs.size, dtype=np.int64)
    codes, first, _ = _encode_codes(np.full(nbrs.size, src), nbrs, pos, block_size)
    lens = varint_lengths(codes)
    code_off = np.r_[0, np.cumsum(lens)]
    block_offsets = np.r_[code_off[np.flatnonzero(first)], code_off[-1]].astype(np.int64)
    if nbrs.size == 0:
        block_offsets = np.zeros(1, dtype=np.int64)
    return CompressedList(int(src), int(nbrs.size), int(block_size), block_offsets, varint_encode(codes, lens))


def decode(L: CompressedList) -> np.ndarray:
    nb = L.num_blocks
    return _decode_blocks(
        L.data, L.block_offsets[:-1], L.block_offsets[1:], np.full(nb, L.src), L.block_lengths()
    )


def _decoded_blocks(L: CompressedList) -> list[np.ndarray]:
    return parallel_map(L.decode_block, range(L.num_blocks))


def c_map(L: CompressedList, F: Callable[[np.ndarray], Any]) -> np.ndarray:
    """Apply a vectorized ``F`` to every neighbor, block by block."""
    parts = parallel_map(lambda b: np.asarray(F(L.decode_block(b))), range(L.num_blocks))
    if not parts:
        return np.empty(0)
    return np.concatenate(parts)


def c_map_reduce(L: CompressedList, F: Callable[[np.ndarray], Any], R: Any = np.add, identity: Any = 0):
    """Reduce ``F(neighbors)`` with ``R``: sequential inside a block, then across blocks."""

    def block(b: int):
        vals = np.asarray(F(L.decode_block(b)))
        if isinstance(R, np.ufunc):
            return R.reduce(vals) if vals.size else identity
        acc = identity
        for x in vals.tolist():
            acc = R(acc, x)
        return acc

    acc = identity
    for part in parallel_map(block, range(L.num_blocks)):
        acc = R(acc, part)
    return acc.item() if hasattr(acc, "item") else acc


def _keep_mask(vals: np.ndarray, P) -> np.ndarray:
    return np.asarray(P(vals), dtype=bool)


def c_filter(L: CompressedList, P, scratch: np.ndarray | None = None) -> np.ndarray:
    """Neighbors satisfying ``P``, in list order.

    Lists longer than one block are decoded block-parallel into ``scratch``
    (at least ``L.length`` cells) before filtering.
    """
    if L.num_blocks <= 1:
        vals = decode(L)
        return vals[_keep_mask(vals, P)]
    if scratch is None or scratch.size < L.length:
        raise ValueError("scratch must hold deg(v) entries for multi-block lists")
    k = L.block_size

    def fill(b: int) -> None:
        blk = L.decode_block(b)
        scratch[b * k:b * k + blk.size] = blk

    parallel_map(fill, range(L.num_blocks))
    vals = scratch[: L.length]
    return vals[_keep_mask(vals, P)].copy()


def c_pack(L: CompressedList, P, scratch: np.ndarray | None = None) -> CompressedList:
    """Recompressed list keeping only neighbors that satisfy ``P``.

    Multi-block lists use a ``2 * deg`` scratch array: decode into the first
    half, filter into the second, then re-encode block by block.
    """
    if L.num_blocks <= 1:
        vals = decode(L)
        return encode(L.src, vals[_keep_mask(vals, P)], L.block_size)
    if scratch is None or scratch.size < 2 * L.length:
        raise ValueError("scratch must hold 2*deg(v) entries for multi-block lists")
    d = L.length
    k = L.block_size

    def fill(b: int) -> None:
        blk = L.decode_block(b)
        scratch[b * k:b * k + blk.size] = blk

    parallel_map(fill, range(L.num_blocks))
    vals = scratch[:d]
    keep = vals[_keep_mask(vals, P)]
    scratch[d:d + keep.size] = keep
    return _reencode(L.src, scratch[d:d + keep.size], k)


def _reencode(src: int, survivors: np.ndarray, k: int) -> CompressedList:
    # size every new block first, prefix-sum into offsets, then write blocks
    nb = -(-survivors.size // k)
    pos = np.arange(survivors.size, dtype=np.int64)
    codes, _, _ = _encode_codes(np.full(survivors.size, src), survivors, pos, k)
    lens = varint_lengths(codes)
    block_bytes = np.add.reduceat(lens, np.arange(0, survivors.size, k)) if nb else np.empty(0, np.int64)
    block_offsets = np.r_[0, np.cumsum(block_bytes)].astype(np.int64)
    data = np.empty(int(block_offsets[-1]), dtype=np.uint8)

    def write(b: int) -> None:
        lo, hi = b * k, min((b + 1) * k, survivors.size)
        data[block_offsets[b]:block_offsets[b + 1]] = varint_encode(codes[lo:hi], lens[lo:hi])

    parallel_map(write, range(nb))
    return CompressedList(int(src), int(survivors.size), int(k), block_offsets, data)


def c_intersect(La: CompressedList, Lb: CompressedList) -> int:
    """Size of the intersection of two compressed sorted lists.

    Splits on the start of the middle relevant block of the shorter list and
    binary-searches the other list's block starts; subproblems are value
    ranges, so the block straddling a split point is scanned on both sides.
    """
    if La.length > Lb.length:
        La, Lb = Lb, La
    if La.length == 0:
        return 0
    sa, sb = La.block_starts(), Lb.block_starts()
    cache: dict[tuple[int, int], np.ndarray] = {}

    def block(which: int, b: int) -> np.ndarray:
        key = (which, b)
        if key not in cache:
            cache[key] = (La if which == 0 else Lb).decode_block(b)
        return cache[key]

    def relevant(starts: np.ndarray, lo: float, hi: float) -> tuple[int, int]:
        # blocks whose value span can meet [lo, hi)
        first = max(int(np.searchsorted(starts, lo, side="right")) - 1, 0)
        last = int(np.searchsorted(starts, hi, side="left"))
        return first, last

    def solve(lo: float, hi: float) -> int:
        a0, a1 = relevant(sa, lo, hi)
        b0, b1 = relevant(sb, lo, hi)
        if a1 <= a0 or b1 <= b0:
            return 0
        if (a1 - a0) + (b1 - b0) <= INTERSECT_BASE_BLOCKS or a1 - a0 == 1:
            xa = np.concatenate([block(0, b) for b in range(a0, a1)])
            xb = np.concatenate([block(1, b) for b in range(b0, b1)])
            xa = xa[(xa >= lo) & (xa < hi)]
            xb = xb[(xb >= lo) & (xb < hi)]
            return int(np.intersect1d(xa, xb, assume_unique=True).size)
        # lo < sa[mid] < hi because mid lies strictly inside the relevant blocks
        vs = int(sa[(a0 + a1) // 2])
        return solve(lo, vs) + solve(vs, hi)

    return solve(-np.inf, np.inf)


# ---------------------------------------------------------------------------
# whole-graph adjacency in parallel-byte form


@dataclass(frozen=True, eq=False)
class CompressedAdjacency:
    """All neighbor lists of a graph, stored back to back."""

    block_size: int
    data: np.ndarray  # uint8
    block_offsets: np.ndarray  # global byte offset of each block, plus the end
    vertex_blocks: np.ndarray  # first block index of each vertex, plus the end

    @property
    def nbytes(self) -> int:
        return int(self.data.size + 8 * (self.block_offsets.size + self.vertex_blocks.size))


def encode_adjacency(offsets: np.ndarray, edges: np.ndarray, block_size: int = DEFAULT_BLOCK_SIZE) -> CompressedAdjacency:
    offsets = np.asarray(offsets, dtype=np.int64)
    edges = np.asarray(edges, dtype=np.int64)
    n = offsets.size - 1
    deg = np.diff(offsets)
    src = np.repeat(np.arange(n, dtype=np.int64), deg)
    pos = np.arange(edges.size, dtype=np.int64) - np.repeat(offsets[:-1], deg)
    codes, first, gaps = _encode_codes(src, edges, pos, block_size)
    if np.any(gaps[~first] <= 0):
        raise CompressionError("neighbor lists must be strictly increasing")
    lens = varint_lengths(codes)
    code_off = np.r_[0, np.cumsum(lens)].astype(np.int64)
    block_offsets = np.r_[code_off[np.flatnonzero(first)], code_off[-1]].astype(np.int64)
    nblocks = -(-deg // block_size)
    vertex_blocks = np.r_[0, np.cumsum(nblocks)].astype(np.int64)
    return CompressedAdjacency(int(block_size), varint_encode(codes, lens), block_offsets, vertex_blocks)


def decode_slices(store: CompressedAdjacency, degrees: np.ndarray, ids, lo, hi) -> np.ndarray:
    """Neighbors at list positions ``[lo[i], hi[i])`` of vertex ``ids[i]``, concatenated."""
    ids = np.asarray(ids, dtype=np.int64)
    lo = np.asarray(lo, dtype=np.int64)
    hi = np.asarray(hi, dtype=np.int64)
    want = hi - lo
    live = want > 0
    if not np.any(live):
        return np.empty(0, dtype=np.int64)
    ids, lo, hi, want = ids[live], lo[live], hi[live], want[live]
    k = store.block_size
    kb0 = lo // k
    kb1 = (hi - 1) // k
    nbk = kb1 - kb0 + 1
    owner = np.repeat(np.arange(ids.size), nbk)
    kb = ranges(kb0, nbk)
    gblock = store.vertex_blocks[ids][owner] + kb
    blen = np.minimum(k, degrees[ids][owner] - kb * k)
    dec = _decode_blocks(
        store.data, store.block_offsets[gblock], store.block_offsets[gblock + 1], ids[owner], blen
    )
    seg_len = np.bincount(owner, weights=blen, minlength=ids.size).astype(np.int64)
    seg_start = np.cumsum(seg_len) - seg_len
    return dec[ranges(seg_start + (lo - kb0 * k), want)]


def adjacency_list(store: CompressedAdjacency, degrees: np.ndarray, v: int) -> CompressedList:
    """View one vertex's neighbor list as a standalone :class:`CompressedList`."""
    b0, b1 = store.vertex_blocks[v], store.vertex_blocks[v + 1]
    base = store.block_offsets[b0]
    offs = store.block_offsets[b0:b1 + 1] - base
    data = store.data[base:store.block_offsets[b1]]
    if b1 == b0:
        offs = np.zeros(1, dtype=np.int64)
    return CompressedList(int(v), int(degrees[v]), store.block_size, offs, data)
