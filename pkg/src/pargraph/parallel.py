"""Worker pool shared by the bulk-synchronous kernels.

Work is always split into chunks whose boundaries depend only on the input
size, never on the worker count, so every kernel returns bit-identical
results for any number of workers.
"""

from __future__ import annotations

import os
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import contextmanager
from typing import Callable, Iterable, Iterator, Sequence, TypeVar

T = TypeVar("T")
R = TypeVar("R")

_lock = threading.Lock()
_num_workers = 1
_pool: ThreadPoolExecutor | None = None


def max_workers() -> int:
    return os.cpu_count() or 1


def num_workers() -> int:
    return _num_workers


def set_num_workers(k: int) -> None:
    """Set the number of worker threads used by parallel kernels."""
    global _num_workers, _pool
    if k < 1:
        raise ValueError("worker count must be >= 1")
    with _lock:
        if k != _num_workers and _pool is not None:
            _pool.shutdown(wait=True)
            _pool = None
        _num_workers = k


@contextmanager
def workers(k: int | None) -> Iterator[None]:
    """Temporarily use ``k`` workers (``None`` keeps the current setting)."""
    if k is None:
        yield
        return
    prev = num_workers()
    set_num_workers(k)
    try:
        yield
    finally:
        set_num_workers(prev)


def _get_pool() -> ThreadPoolExecutor:
    global _pool
    with _lock:
        if _pool is None:
            _pool = ThreadPoolExecutor(max_workers=_num_workers, thread_name_prefix="pargraph")
        return _pool


def parallel_map(fn: Callable[[T], R], items: Sequence[T] | Iterable[T]) -> list[R]:
    """Apply ``fn`` to every item, preserving input order in the result."""
    items = list(items)
    if _num_workers == 1 or len(items) <= 1:
        return [fn(x) for x in items]
    return list(_get_pool().map(fn, items))


def chunk_bounds(total: int, grain: int) -> list[tuple[int, int]]:
    """Split ``range(total)`` into consecutive ranges of at most ``grain``."""
    if total <= 0:
        return []
    return [(lo, min(lo + grain, total)) for lo in range(0, total, grain)]
