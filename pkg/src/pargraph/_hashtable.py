"""Open-addressing hash table with batched linear probing.

A batch of keys probes in lock step. When several new keys race for the
same empty slot, the earliest one in the batch claims it and the rest
re-examine that slot in the next step, which makes the final layout a
deterministic function of the insertion batches.
"""

from __future__ import annotations

from typing import Any

import numpy as np

from .primitives import first_occurrence, mix64

EMPTY = np.iinfo(np.int64).min


def _pow2_at_least(x: int) -> int:
    return 1 << max(int(x) - 1, 1).bit_length()


class ProbeTable:
    """Set or map from int64 keys to values combined with a ufunc.

    Parameters
    ----------
    capacity : expected number of keys; the table starts at twice that.
    dtype : value dtype, or None for a plain set.
    max_load : grow (doubling) before the load factor would exceed this.
    group : keys are hashed on ``key // group``, so keys packing
        ``(vertex, tag)`` as ``vertex * group + tag`` share a probe sequence.
    """

    def __init__(
        self,
        capacity: int = 16,
        dtype: Any = None,
        max_load: float = 0.75,
        identity: Any = 0,
        group: int = 1,
    ):
        self.max_load = max_load
        self.group = max(int(group), 1)
        self.identity = identity
        self.dtype = None if dtype is None else np.dtype(dtype)
        self._alloc(_pow2_at_least(max(2 * capacity, 4)))
        self.size = 0
        self.grows = 0

    def _alloc(self, cap: int) -> None:
        self.keys = np.full(cap, EMPTY, dtype=np.int64)
        self.vals = None if self.dtype is None else np.full(cap, self.identity, dtype=self.dtype)

    @property
    def capacity(self) -> int:
        return int(self.keys.size)

    def __len__(self) -> int:
        return self.size

    def _slots(self, keys: np.ndarray) -> np.ndarray:
        if self.group > 1:
            keys = keys // self.group
        return (mix64(keys.astype(np.uint64)) & np.uint64(self.capacity - 1)).astype(np.int64)

    def _grow(self, need: int) -> None:
        cap = self.capacity
        while need > self.max_load * cap:
            cap *= 2
        if cap == self.capacity:
            return
        live = self.keys != EMPTY
        old_keys = self.keys[live]
        old_vals = None if self.vals is None else self.vals[live]
        order = np.argsort(old_keys, kind="stable")
        self._alloc(cap)
        self.size = 0
        self.grows += 1
        if old_keys.size:
            self._insert(old_keys[order], None if old_vals is None else old_vals[order], None)

    def _insert(self, keys: np.ndarray, vals, combine) -> np.ndarray:
        n = keys.size
        inserted = np.zeros(n, dtype=bool)
        slot = self._slots(keys)
        pending = np.arange(n, dtype=np.int64)
        mask = self.capacity - 1
        while pending.size:
            s = slot[pending]
            cur = self.keys[s]
            k = keys[pending]
            found = cur == k
            if vals is not None and combine is not None and np.any(found):
                combine.at(self.vals, s[found], vals[pending[found]])
            empty = cur == EMPTY
            claim = np.zeros(pending.size, dtype=bool)
            e_idx = np.flatnonzero(empty)
            if e_idx.size:
                win = first_occurrence(s[e_idx])
                claim[e_idx[win]] = True
                cs = s[claim]
                self.keys[cs] = k[claim]
                if self.vals is not None:
                    if vals is None:
                        self.vals[cs] = self.identity
                    else:
                        self.vals[cs] = vals[pending[claim]]
                inserted[pending[claim]] = True
                self.size += int(claim.sum())
            # losers of a claim retry the same slot; collisions move on
            advance = ~found & ~empty
            slot[pending[advance]] = (s[advance] + 1) & mask
            pending = pending[~found & ~claim]
        return inserted

    def insert(self, keys, vals=None, combine: np.ufunc | None = None) -> np.ndarray:
        """Insert a batch; return a mask of keys that were new to the table.

        Values of keys already present (or repeated in the batch) are merged
        with ``combine``; without it the first stored value is kept.
        """
        keys = np.asarray(keys, dtype=np.int64)
        if keys.size and np.any(keys == EMPTY):
            raise ValueError("key collides with the empty marker")
        v = None if vals is None else np.broadcast_to(np.asarray(vals, dtype=self.dtype), keys.shape)
        self._grow(self.size + keys.size)
        return self._insert(keys, v, combine)

    def find(self, keys) -> np.ndarray:
        """Slot index of every key, or -1 when absent."""
        keys = np.asarray(keys, dtype=np.int64)
        out = np.full(keys.size, -1, dtype=np.int64)
        slot = self._slots(keys)
        pending = np.arange(keys.size, dtype=np.int64)
        mask = self.capacity - 1
        while pending.size:
            s = slot[pending]
            cur = self.keys[s]
            hit = cur == keys[pending]
            out[pending[hit]] = s[hit]
            go = ~hit & (cur != EMPTY)
            slot[pending[go]] = (s[go] + 1) & mask
            pending = pending[go]
        return out

    def contains(self, keys) -> np.ndarray:
        return self.find(keys) >= 0

    def items(self) -> tuple[np.ndarray, np.ndarray | None]:
        """Stored keys and values in slot order."""
        live = self.keys != EMPTY
        return self.keys[live], None if self.vals is None else self.vals[live]
