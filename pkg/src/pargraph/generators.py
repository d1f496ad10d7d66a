"""Deterministic synthetic graphs.

All generators are pure functions of their parameters and seed. With
``weighted=True`` every (undirected) edge draws an integer weight uniformly
from ``[1, ceil(log2 n))``, or weight 1 when that range is empty.
"""

from __future__ import annotations

import math

import numpy as np

from .graph import Graph, build_csr
from .primitives import RandomSource

KINDS = ("torus3d", "grid", "path", "star", "er", "rmat")


def _finish(n: int, src, dst, *, directed: bool, weighted: bool, rng: RandomSource) -> Graph:
    src = np.asarray(src, dtype=np.int64)
    dst = np.asarray(dst, dtype=np.int64)
    w = log_weights(n, src.size, rng) if weighted else None
    return build_csr(n, src, dst, w, symmetrize=not directed)


def log_weights(n: int, count: int, rng: RandomSource) -> np.ndarray:
    """Uniform integers in ``[1, ceil(log2 n))``."""
    hi = math.ceil(math.log2(n)) if n > 1 else 1
    if hi <= 2:
        return np.ones(count, dtype=np.int64)
    return rng.integers(count, 1, hi)


def add_weights(G: Graph, seed: int = 0) -> Graph:
    """Copy of ``G`` with log-range weights (equal on both directions when symmetric)."""
    rng = RandomSource(seed)
    b = G.edge_arrays()
    if G.symmetric:
        lo, hi = np.minimum(b.src, b.dst), np.maximum(b.src, b.dst)
        keep = b.src < b.dst
        w_und = log_weights(G.n, int(keep.sum()), rng)
        key = lo * G.n + hi
        ukey = key[keep]
        order = np.argsort(ukey)
        w = w_und[order][np.searchsorted(ukey[order], key)]
    else:
        w = log_weights(G.n, G.m, rng)
    return G.with_weights(w)


def torus3d(s: int, *, weighted: bool = False, seed: int = 0) -> Graph:
    """``s x s x s`` torus; each vertex links to its two neighbors per dimension."""
    if s < 3:
        raise ValueError("torus side must be at least 3")
    idx = np.arange(s**3, dtype=np.int64)
    x, y, z = idx // (s * s), (idx // s) % s, idx % s
    src, dst = [], []
    for dx, dy, dz in ((1, 0, 0), (0, 1, 0), (0, 0, 1)):
        src.append(idx)
        dst.append(((x + dx) % s) * s * s + ((y + dy) % s) * s + (z + dz) % s)
    return _finish(s**3, np.concatenate(src), np.concatenate(dst), directed=False, weighted=weighted,
                   rng=RandomSource(seed))


def grid(rows: int, cols: int, *, weighted: bool = False, seed: int = 0) -> Graph:
    """2D grid without wraparound."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be positive")
    idx = np.arange(rows * cols, dtype=np.int64).reshape(rows, cols)
    src = np.concatenate([idx[:, :-1].ravel(), idx[:-1, :].ravel()])
    dst = np.concatenate([idx[:, 1:].ravel(), idx[1:, :].ravel()])
    return _finish(rows * cols, src, dst, directed=False, weighted=weighted, rng=RandomSource(seed))


def path(n: int, *, weighted: bool = False, seed: int = 0) -> Graph:
    if n < 1:
        raise ValueError("path needs at least one vertex")
    v = np.arange(n - 1, dtype=np.int64)
    return _finish(n, v, v + 1, directed=False, weighted=weighted, rng=RandomSource(seed))


def star(n: int, *, weighted: bool = False, seed: int = 0) -> Graph:
    """Vertex 0 joined to every other vertex."""
    if n < 1:
        raise ValueError("star needs at least one vertex")
    leaves = np.arange(1, n, dtype=np.int64)
    return _finish(n, np.zeros_like(leaves), leaves, directed=False, weighted=weighted, rng=RandomSource(seed))


def er(n: int, p: float, *, directed: bool = False, weighted: bool = False, seed: int = 0) -> Graph:
    """G(n, p) sampled by geometric skipping over the pair index space."""
    if n < 0 or not 0.0 <= p <= 1.0:
        raise ValueError("need n >= 0 and 0 <= p <= 1")
    rng = RandomSource(seed)
    total = n * (n - 1) if directed else n * (n - 1) // 2
    picks = _skip_sample(total, p, rng)
    if directed:
        i = picks // max(n - 1, 1)
        j = picks % max(n - 1, 1)
        j = j + (j >= i)
    else:
        # row i owns pairs (i, i+1..n-1) starting at i*n - i*(i+1)/2
        rows = np.arange(n, dtype=np.int64)
        starts = rows * n - rows * (rows + 1) // 2
        i = np.searchsorted(starts, picks, side="right") - 1
        j = picks - starts[i] + i + 1
    return _finish(n, i, j, directed=directed, weighted=weighted, rng=rng)


def _skip_sample(total: int, p: float, rng: RandomSource) -> np.ndarray:
    """Sorted indices in ``[0, total)`` each kept independently with probability ``p``."""
    if total == 0 or p == 0.0:
        return np.empty(0, dtype=np.int64)
    if p == 1.0:
        return np.arange(total, dtype=np.int64)
    log_q = math.log1p(-p)
    out = []
    pos = -1
    batch = max(1024, int(total * p * 1.1) + 64)
    while True:
        u = rng.uniform(batch)
        gaps = np.floor(np.log1p(-u) / log_q).astype(np.int64) + 1
        idx = pos + np.cumsum(gaps)
        keep = idx < total
        out.append(idx[keep])
        if not keep.all():
            break
        pos = int(idx[-1])
    return np.concatenate(out)


def rmat(
    scale: int,
    edge_factor: int = 8,
    a: float = 0.5,
    b: float = 0.1,
    c: float = 0.1,
    *,
    directed: bool = False,
    weighted: bool = False,
    seed: int = 0,
) -> Graph:
    """Recursive-matrix graph on ``2**scale`` vertices with ``edge_factor * n`` draws."""
    if scale < 0 or a < 0 or b < 0 or c < 0 or a + b + c > 1:
        raise ValueError("invalid rmat parameters")
    n = 1 << scale
    m = edge_factor * n
    rng = RandomSource(seed)
    src = np.zeros(m, dtype=np.int64)
    dst = np.zeros(m, dtype=np.int64)
    for _ in range(scale):
        u = rng.uniform(m)
        right = ((u >= a) & (u < a + b)) | (u >= a + b + c)
        down = u >= a + b
        src = 2 * src + down
        dst = 2 * dst + right
    return _finish(n, src, dst, directed=directed, weighted=weighted, rng=rng)


_BUILDERS = {"torus3d": torus3d, "grid": grid, "path": path, "star": star, "er": er, "rmat": rmat}
_INT_KEYS = {"s", "rows", "cols", "n", "scale", "edge_factor", "seed"}
_BOOL_KEYS = {"directed", "weighted"}


def generate(kind: str, params: dict | None = None, seed: int = 0) -> Graph:
    """Build a graph of the given kind; ``seed`` is overridden by ``params['seed']``."""
    if kind not in _BUILDERS:
        raise ValueError(f"unknown generator {kind!r}; choose from {', '.join(KINDS)}")
    kw = {"seed": seed}
    for key, val in (params or {}).items():
        if isinstance(val, str):
            if key in _INT_KEYS:
                val = int(val)
            elif key in _BOOL_KEYS:
                val = val.lower() in ("1", "true", "yes")
            else:
                val = float(val)
        kw[key] = val
    try:
        return _BUILDERS[kind](**kw)
    except TypeError as exc:
        raise ValueError(f"bad parameters for {kind}: {exc}") from None


def parse_spec(spec: str) -> tuple[str, dict]:
    """Split ``gen:KIND:key=val[,key=val...]`` (``:`` also separates pairs)."""
    if not spec.startswith("gen:"):
        raise ValueError("generator specs start with 'gen:'")
    parts = spec[4:].replace(",", ":").split(":")
    kind, params = parts[0], {}
    for item in parts[1:]:
        if not item:
            continue
        if "=" not in item:
            raise ValueError(f"expected key=value in generator spec, got {item!r}")
        key, val = item.split("=", 1)
        params[key] = val
    return kind, params


def from_spec(spec: str, seed: int = 0) -> Graph:
    kind, params = parse_spec(spec)
    return generate(kind, params, seed)
