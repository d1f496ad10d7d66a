"""Low-contention aggregation of (key, value) pairs.

Keys that are frequent in a random sample are treated as heavy and reduced
with plain per-block reductions. The remaining light keys are spread over
hash buckets; a per-block pass counts bucket sizes, a scan over the blocks
turns the counts into offsets, and every light bucket is then combined in
its own open-addressing table.
"""

from __future__ import annotations

import math
from typing import Any, Callable

import numpy as np

from ._hashtable import ProbeTable
from .parallel import chunk_bounds, parallel_map
from .primitives import RandomSource, mix64

BLOCK = 4096
_SAMPLE_SEED = 0x5EED


def _fold_groups(keys: np.ndarray, vals: np.ndarray, R: Callable[[Any, Any], Any]):
    order = np.argsort(keys, kind="stable")
    sk, sv = keys[order], vals[order]
    starts = np.flatnonzero(np.r_[True, sk[1:] != sk[:-1]])
    ends = np.r_[starts[1:], sk.size]
    out = []
    for lo, hi in zip(starts.tolist(), ends.tolist()):
        acc = sv[lo]
        for x in sv[lo + 1:hi]:
            acc = R(acc, x)
        out.append(acc)
    return sk[starts], np.asarray(out, dtype=vals.dtype)


def heavy_keys(keys: np.ndarray, rng: RandomSource | None = None) -> np.ndarray:
    """Keys whose sampled frequency suggests at least ~sqrt(N) log N copies."""
    total = keys.size
    if total < BLOCK:
        return np.empty(0, dtype=np.int64)
    rng = rng or RandomSource(_SAMPLE_SEED)
    s = int(math.isqrt(total)) + 1
    sample = keys[rng.integers(s, 0, total)]
    uniq, counts = np.unique(sample, return_counts=True)
    return uniq[counts >= max(2, int(math.log2(total)))]


def histogram(keys, vals=None, R: Any = np.add, *, rng: RandomSource | None = None):
    """Combine the values of equal keys with ``R``.

    Parameters
    ----------
    keys : int64 keys.
    vals : values, one per key; defaults to ones (a count per key).
    R : associative, commutative combiner; numpy ufuncs take the fast path.

    Returns
    -------
    (unique_keys, combined_values), sorted by key.
    """
    keys = np.asarray(keys, dtype=np.int64).ravel()
    vals = np.ones(keys.size, dtype=np.int64) if vals is None else np.asarray(vals).ravel()
    if vals.size != keys.size:
        raise ValueError("keys and values differ in length")
    if keys.size == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=vals.dtype)
    if not isinstance(R, np.ufunc):
        return _fold_groups(keys, vals, R)

    heavy = np.sort(heavy_keys(keys, rng))
    nh = heavy.size
    n_light = 1 << max(0, (keys.size // BLOCK).bit_length())
    bounds = chunk_bounds(keys.size, BLOCK)

    def bucket_of(k: np.ndarray) -> np.ndarray:
        b = (mix64(k.astype(np.uint64)) & np.uint64(n_light - 1)).astype(np.int64)
        if nh:
            pos = np.searchsorted(heavy, k)
            is_heavy = (pos < nh) & (heavy[np.minimum(pos, nh - 1)] == k)
            b[is_heavy] = n_light + pos[is_heavy]
        return b

    def block_pass(bd):
        lo, hi = bd
        b = bucket_of(keys[lo:hi])
        light_counts = np.bincount(b[b < n_light], minlength=n_light)
        heavy_vals = None
        if nh:
            hb = b >= n_light
            hv = np.full(nh, np.nan if vals.dtype.kind == "f" else 0, dtype=vals.dtype)
            present = np.zeros(nh, dtype=bool)
            if np.any(hb):
                idx = b[hb] - n_light
                order = np.argsort(idx, kind="stable")
                si = idx[order]
                starts = np.flatnonzero(np.r_[True, si[1:] != si[:-1]])
                hv[si[starts]] = R.reduceat(vals[lo:hi][hb][order], starts)
                present[si[starts]] = True
            heavy_vals = (hv, present)
        return b, light_counts, heavy_vals

    blocks = parallel_map(block_pass, bounds)

    # scan over blocks: bucket-major offsets for the light pairs
    counts = np.stack([blk[1] for blk in blocks])  # (nblocks, n_light)
    flat = counts.T.ravel()
    offs = (np.cumsum(flat) - flat).reshape(n_light, len(blocks)).T
    bucket_sizes = counts.sum(axis=0)
    n_lt = int(bucket_sizes.sum())
    lk = np.empty(n_lt, dtype=np.int64)
    lv = np.empty(n_lt, dtype=vals.dtype)

    def scatter(i: int) -> None:
        lo, hi = bounds[i]
        b = blocks[i][0]
        light = np.flatnonzero(b < n_light)
        bl = b[light]
        order = np.argsort(bl, kind="stable")
        bl = bl[order]
        starts = np.flatnonzero(np.r_[True, bl[1:] != bl[:-1]]) if bl.size else np.empty(0, np.int64)
        rank = np.arange(bl.size) - np.repeat(starts, np.diff(np.r_[starts, bl.size]))
        dest = offs[i, bl] + rank
        lk[dest] = keys[lo:hi][light[order]]
        lv[dest] = vals[lo:hi][light[order]]

    parallel_map(scatter, range(len(bounds)))

    bucket_start = np.r_[0, np.cumsum(bucket_sizes)]

    def reduce_bucket(j: int):
        lo, hi = int(bucket_start[j]), int(bucket_start[j + 1])
        if lo == hi:
            return None
        table = ProbeTable(hi - lo, dtype=vals.dtype)
        table.insert(lk[lo:hi], lv[lo:hi], combine=R)
        return table.items()

    parts = [p for p in parallel_map(reduce_bucket, range(n_light)) if p is not None]
    out_k = [p[0] for p in parts]
    out_v = [p[1] for p in parts]
    if nh:
        hv = np.stack([blk[2][0] for blk in blocks])
        present = np.stack([blk[2][1] for blk in blocks])
        for h in range(nh):
            col = hv[present[:, h], h]
            if col.size:
                out_k.append(heavy[h:h + 1])
                out_v.append(np.asarray([R.reduce(col)], dtype=vals.dtype))
    k = np.concatenate(out_k)
    v = np.concatenate(out_v)
    order = np.argsort(k, kind="stable")
    return k[order], v[order]


def group_by_oracle(keys, vals, R: Callable[[Any, Any], Any]):
    """Sequential dictionary fold, kept for cross-checking."""
    acc: dict[int, Any] = {}
    for k, v in zip(np.asarray(keys).tolist(), np.asarray(vals).tolist()):
        acc[k] = R(acc[k], v) if k in acc else v
    ks = sorted(acc)
    return np.asarray(ks, dtype=np.int64), np.asarray([acc[k] for k in ks])
