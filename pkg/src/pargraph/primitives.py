"""Sequence primitives, atomic primitives and counter-based randomness.

The batch atomics resolve conflicting updates inside one vectorized call as if
the updates were applied one at a time in a fixed linearization, so results
never depend on thread scheduling:

* ``test_and_set_batch``: the first occurrence of each index wins.
* ``fetch_and_add_batch``: updates apply in input order.
* ``priority_write_batch``: the best value for each cell is applied first (the
  earliest occurrence among equals), so it is the only write that returns
  True, and only if it beats the value already stored.
"""

from __future__ import annotations

import functools
import itertools
import operator
import threading
from typing import Any, Callable

import numpy as np

from .parallel import chunk_bounds, parallel_map

SCAN_GRAIN = 1 << 16

INF = np.iinfo(np.int64).max
NEG_INF = np.iinfo(np.int64).min


# ---------------------------------------------------------------------------
# scan / reduce / filter


def scan(A, op: Any = np.add, identity: Any = 0):
    """Exclusive prefix sums under an associative ``op``.

    Returns ``(prefix, total)`` where ``prefix[i] = identity op A[0] op ...
    op A[i-1]``. Numpy ufuncs take a blocked two-pass route; any other
    callable is folded sequentially.
    """
    if isinstance(op, np.ufunc):
        a = np.asarray(A)
        dtype = np.result_type(a.dtype, np.asarray(identity).dtype)
        a = a.astype(dtype, copy=False)
        if a.size == 0:
            return a.copy(), identity
        bounds = chunk_bounds(a.size, SCAN_GRAIN)
        local = parallel_map(lambda b: op.accumulate(a[b[0]:b[1]]), bounds)
        totals = np.array([blk[-1] for blk in local], dtype=dtype)
        carry = np.empty(len(bounds), dtype=dtype)
        carry[0] = identity
        carry[1:] = op.accumulate(totals)[:-1]
        inclusive = np.empty(a.size, dtype=dtype)

        def fix(i: int) -> None:
            lo, hi = bounds[i]
            inclusive[lo:hi] = op(carry[i], local[i])

        parallel_map(fix, range(len(bounds)))
        out = np.empty(a.size, dtype=dtype)
        out[0] = identity
        out[1:] = inclusive[:-1]
        return out, inclusive[-1].item()
    seq = list(A)
    prefix = list(itertools.accumulate(seq, op, initial=identity))
    return prefix[:-1], prefix[-1]


def reduce(A, op: Any = np.add, identity: Any = 0):
    """Fold ``A`` with an associative ``op`` starting from ``identity``."""
    if isinstance(op, np.ufunc):
        a = np.asarray(A)
        if a.size == 0:
            return identity
        parts = parallel_map(lambda b: op.reduce(a[b[0]:b[1]]), chunk_bounds(a.size, SCAN_GRAIN))
        res = op(identity, op.reduce(np.asarray(parts)))
        return res.item() if hasattr(res, "item") else res
    return functools.reduce(op, A, identity)


def filter(A, pred):  # noqa: A001 - mirrors the primitive's name
    """Stable filter: keep elements of ``A`` where ``pred`` holds.

    ``pred`` is either a boolean mask or a callable; callables are tried in
    vectorized form first and fall back to per-element evaluation.
    """
    a = np.asarray(A)
    if isinstance(pred, np.ndarray) and pred.dtype == bool:
        mask = pred
    else:
        mask = None
        try:
            res = np.asarray(pred(a))
            if res.shape == a.shape and res.dtype == bool:
                mask = res
        except Exception:
            mask = None
        if mask is None:
            mask = np.fromiter((bool(pred(x)) for x in a), dtype=bool, count=a.size)
    return a[mask]


# ---------------------------------------------------------------------------
# scalar atomics


class AtomicCell:
    """A shared memory cell; the atomic primitives below lock it briefly."""

    __slots__ = ("value", "_lock")

    def __init__(self, value: Any = 0):
        self.value = value
        self._lock = threading.Lock()

    def __repr__(self) -> str:
        return f"AtomicCell({self.value!r})"


def test_and_set(cell: AtomicCell) -> bool:
    with cell._lock:
        if cell.value == 0:
            cell.value = 1
            return True
        return False


def fetch_and_add(cell: AtomicCell, delta: Any = 1) -> Any:
    with cell._lock:
        prior = cell.value
        cell.value = prior + delta
        return prior


def priority_write(cell: AtomicCell, v: Any, higher: Callable[[Any, Any], bool] = operator.lt) -> bool:
    """Store ``v`` if ``higher(v, current)``; report whether it was stored."""
    with cell._lock:
        if higher(v, cell.value):
            cell.value = v
            return True
        return False


# ---------------------------------------------------------------------------
# batch atomics over numpy arrays


def first_occurrence(idx: np.ndarray) -> np.ndarray:
    """Mask selecting the first occurrence of every distinct value in ``idx``."""
    mask = np.zeros(idx.size, dtype=bool)
    if idx.size:
        _, first = np.unique(idx, return_index=True)
        mask[first] = True
    return mask


def test_and_set_batch(flags: np.ndarray, idx: np.ndarray) -> np.ndarray:
    idx = np.asarray(idx, dtype=np.int64)
    won = first_occurrence(idx)
    won &= flags[idx] == 0
    flags[idx[won]] = 1
    return won


def fetch_and_add_batch(arr: np.ndarray, idx: np.ndarray, delta) -> np.ndarray:
    """Add ``delta`` at ``arr[idx]``; return each update's prior value."""
    idx = np.asarray(idx, dtype=np.int64)
    delta = np.broadcast_to(np.asarray(delta, dtype=arr.dtype), idx.shape)
    if idx.size == 0:
        return np.empty(0, dtype=arr.dtype)
    order = np.argsort(idx, kind="stable")
    si = idx[order]
    sd = delta[order]
    excl = np.cumsum(sd) - sd
    starts = np.flatnonzero(np.r_[True, si[1:] != si[:-1]])
    lens = np.diff(np.r_[starts, si.size])
    excl = excl - np.repeat(excl[starts], lens)
    prior = np.empty(idx.size, dtype=arr.dtype)
    prior[order] = arr[si] + excl
    np.add.at(arr, idx, delta)
    return prior


def group_best(idx: np.ndarray, vals: np.ndarray, mode: str = "min") -> np.ndarray:
    """Mask of the earliest occurrence of the best value per distinct index."""
    n = idx.size
    mask = np.zeros(n, dtype=bool)
    if n == 0:
        return mask
    order = np.argsort(idx, kind="stable")
    si = idx[order]
    sv = vals[order]
    starts = np.flatnonzero(np.r_[True, si[1:] != si[:-1]])
    ufunc = np.minimum if mode == "min" else np.maximum
    best = ufunc.reduceat(sv, starts)
    lens = np.diff(np.r_[starts, n])
    cand = np.flatnonzero(sv == np.repeat(best, lens))
    grp = np.searchsorted(starts, cand, side="right") - 1
    _, first = np.unique(grp, return_index=True)
    mask[order[cand[first]]] = True
    return mask


def priority_write_batch(arr: np.ndarray, idx: np.ndarray, vals, mode: str = "min") -> np.ndarray:
    """Priority-write ``vals`` into ``arr[idx]`` keeping the min (or max)."""
    idx = np.asarray(idx, dtype=np.int64)
    vals = np.broadcast_to(np.asarray(vals, dtype=arr.dtype), idx.shape)
    win = group_best(idx, vals, mode)
    cur = arr[idx]
    win &= (vals < cur) if mode == "min" else (vals > cur)
    arr[idx[win]] = vals[win]
    return win


# ---------------------------------------------------------------------------
# randomness

_GOLDEN = np.uint64(0x9E3779B97F4A7C15)
_M1 = np.uint64(0xBF58476D1CE4E5B9)
_M2 = np.uint64(0x94D049BB133111EB)


def mix64(z: np.ndarray) -> np.ndarray:
    """SplitMix64 finalizer on a uint64 array (wrapping arithmetic)."""
    z = np.asarray(z, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = (z ^ (z >> np.uint64(30))) * _M1
        z = (z ^ (z >> np.uint64(27))) * _M2
    return z ^ (z >> np.uint64(31))


def hash64(key: int, index: np.ndarray) -> np.ndarray:
    idx = np.asarray(index, dtype=np.uint64)
    with np.errstate(over="ignore"):
        return mix64(np.uint64(key & 0xFFFFFFFFFFFFFFFF) + (idx + np.uint64(1)) * _GOLDEN)


class RandomSource:
    """Counter-based random stream.

    Every draw hashes ``(stream key, position)``, so a draw's values depend only
    on the seed and on how many draws preceded it in program order.
    """

    def __init__(self, seed: int = 0):
        self.seed = int(seed)
        self._key = int(mix64(np.array([self.seed & 0xFFFFFFFFFFFFFFFF], dtype=np.uint64))[0])
        self._counter = 0

    def __repr__(self) -> str:
        return f"RandomSource(seed={self.seed}, counter={self._counter})"

    def _next_key(self) -> int:
        key = int(hash64(self._key, np.array([self._counter]))[0])
        self._counter += 1
        return key

    def split(self) -> "RandomSource":
        child = RandomSource.__new__(RandomSource)
        child.seed = self.seed
        child._key = self._next_key()
        child._counter = 0
        return child

    def bits(self, n: int) -> np.ndarray:
        return hash64(self._next_key(), np.arange(n, dtype=np.uint64))

    def uniform(self, n: int) -> np.ndarray:
        """Doubles in [0, 1)."""
        return (self.bits(n) >> np.uint64(11)).astype(np.float64) * (1.0 / (1 << 53))

    def integers(self, n: int, low: int, high: int) -> np.ndarray:
        """Integers in [low, high)."""
        span = high - low
        if span <= 0:
            raise ValueError("empty range")
        return (self.uniform(n) * span).astype(np.int64).clip(0, span - 1) + low

    def exponential(self, n: int, rate: float) -> np.ndarray:
        """Exp(rate) samples by inverting the CDF."""
        return -np.log1p(-self.uniform(n)) / rate

    def permutation(self, n: int) -> np.ndarray:
        return np.argsort(self.bits(n), kind="stable").astype(np.int64)


def random_permutation(n: int, rng: RandomSource) -> np.ndarray:
    if n < 0:
        raise ValueError("n must be non-negative")
    return rng.permutation(n)


def as_rng(rng: RandomSource | int | None) -> RandomSource:
    if isinstance(rng, RandomSource):
        return rng
    return RandomSource(0 if rng is None else rng)
