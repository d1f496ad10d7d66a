"""Bucket structure mapping vertices to ordered integer keys.

A window of ``open_buckets`` consecutive keys is materialized as explicit
buckets; everything beyond the window waits in a single overflow bucket
that is re-split lazily once the window is used up. Bucket entries are
never removed eagerly: an entry is live only while it still matches the
vertex's current key and the vertex has not been extracted.
"""

from __future__ import annotations

import numpy as np

from .frontier import VertexSubset
from .histogram import histogram

NULL_BUCKET = np.iinfo(np.int64).max
OPEN_BUCKETS = 128


class Buckets:
    """Julienne-style buckets over ``n`` vertices.

    Parameters
    ----------
    n : number of vertices.
    keys : initial key per vertex; :data:`NULL_BUCKET` means never process.
    order : ``"increasing"`` or ``"decreasing"``.
    open_buckets : width of the materialized key window.
    """

    def __init__(self, n: int, keys, order: str = "increasing", open_buckets: int = OPEN_BUCKETS):
        if order not in ("increasing", "decreasing"):
            raise ValueError("order must be 'increasing' or 'decreasing'")
        keys = np.asarray(keys, dtype=np.int64)
        if keys.size != n:
            raise ValueError("one key per vertex is required")
        if np.any((keys < 0) & (keys != NULL_BUCKET)):
            raise ValueError("bucket keys must be non-negative")
        self.n = n
        self.order = order
        self.width = open_buckets
        self._sign = 1 if order == "increasing" else -1
        # internal keys always run in increasing order
        self._key = np.where(keys == NULL_BUCKET, NULL_BUCKET, self._sign * keys)
        self.extracted = np.zeros(n, dtype=bool)
        self.cursor: int | None = None
        self.rounds = 0
        self._base = 0
        self._open: list[list[np.ndarray]] = [[] for _ in range(self.width)]
        self._overflow: list[np.ndarray] = []
        live = np.flatnonzero(self._key != NULL_BUCKET)
        if live.size:
            self._base = int(self._key[live].min())
        self._place(live)

    def key(self, v) -> np.ndarray:
        """Current external key of the given vertices."""
        k = self._key[v]
        return np.where(k == NULL_BUCKET, NULL_BUCKET, self._sign * k)

    def _place(self, ids: np.ndarray) -> None:
        if ids.size == 0:
            return
        k = self._key[ids]
        slot = k - self._base
        inwin = (slot >= 0) & (slot < self.width)
        over = ids[~inwin]
        if over.size:
            self._overflow.append(over)
        ids, slot = ids[inwin], slot[inwin]
        if ids.size == 0:
            return
        order = np.argsort(slot, kind="stable")
        ids, slot = ids[order], slot[order]
        starts = np.flatnonzero(np.r_[True, slot[1:] != slot[:-1]])
        for lo, hi in zip(starts, np.r_[starts[1:], slot.size]):
            self._open[int(slot[lo])].append(ids[lo:hi])

    def _live(self, parts: list[np.ndarray], key: int | None) -> np.ndarray:
        if not parts:
            return np.empty(0, dtype=np.int64)
        ids = np.unique(np.concatenate(parts))
        ok = ~self.extracted[ids]
        if key is None:
            ok &= self._key[ids] != NULL_BUCKET
        else:
            ok &= self._key[ids] == key
        return ids[ok]

    def _refill(self) -> bool:
        """Open a new key window at the smallest live overflow key."""
        pending = self._live(self._overflow, None)
        self._overflow = []
        if pending.size == 0:
            return False
        self._base = int(self._key[pending].min())
        self._open = [[] for _ in range(self.width)]
        self._place(pending)
        return True

    def next_bucket(self) -> tuple[int, VertexSubset] | None:
        """Extract the next non-empty bucket, or None once exhausted."""
        while True:
            start = 0 if self.cursor is None else max(self.cursor - self._base, 0)
            for slot in range(start, self.width):
                key = self._base + slot
                parts = self._open[slot]
                if not parts:
                    continue
                ids = self._live(parts, key)
                self._open[slot] = []
                if ids.size:
                    self.extracted[ids] = True
                    self.cursor = key
                    self.rounds += 1
                    return self._sign * key, VertexSubset(self.n, ids=ids)
            if not self._refill():
                return None

    def update(self, vertices, new_keys) -> None:
        """Move vertices to new keys.

        Repeated vertices are merged with a histogram keeping the key closest
        to the cursor. Keys that would fall behind the cursor are clamped to
        it, and extracted vertices are ignored.
        """
        v = np.asarray(vertices, dtype=np.int64)
        k = np.asarray(new_keys, dtype=np.int64)
        if v.size == 0:
            return
        internal = np.where(k == NULL_BUCKET, NULL_BUCKET, self._sign * k)
        if np.unique(v).size != v.size:
            v, internal = histogram(v, internal, np.minimum)
        keep = ~self.extracted[v]
        v, internal = v[keep], internal[keep]
        if self.cursor is not None:
            internal = np.where(internal == NULL_BUCKET, NULL_BUCKET, np.maximum(internal, self.cursor))
        self._key[v] = internal
        live = internal != NULL_BUCKET
        if self.cursor is None and np.any(live) and internal[live].min() < self._base:
            # nothing extracted yet and a key moved below the window: rebuild it
            self._overflow.extend(p for parts in self._open for p in parts)
            self._overflow.append(v[live])
            self._open = [[] for _ in range(self.width)]
            self._refill()
            return
        self._place(v[live])

    def restore(self, vertices, new_keys) -> None:
        """Return extracted vertices to the structure under new keys (clamped)."""
        v = np.asarray(vertices, dtype=np.int64)
        self.extracted[v] = False
        self.update(v, new_keys)


def make_buckets(n: int, keys, order: str = "increasing", open_buckets: int = OPEN_BUCKETS) -> Buckets:
    if callable(keys):
        keys = keys(np.arange(n, dtype=np.int64))
    return Buckets(n, keys, order, open_buckets)


def next_bucket(B: Buckets) -> tuple[int, VertexSubset] | None:
    return B.next_bucket()


def update_buckets(B: Buckets, vertices, new_keys) -> None:
    B.update(vertices, new_keys)
