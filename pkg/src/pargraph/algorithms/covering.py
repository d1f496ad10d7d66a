"""Covering family: maximal independent set, maximal matching, graph
coloring and approximate set cover."""

from __future__ import annotations

import math
from typing import NamedTuple

import numpy as np

from ..bucketing import NULL_BUCKET, make_buckets
from ..graph import Graph
from ..primitives import RandomSource, as_rng, fetch_and_add_batch, priority_write_batch

DEFAULT_EPSILON = 0.01
MM_FILTER_ROUNDS = 3


def _require_symmetric(G: Graph, what: str) -> None:
    if not G.symmetric:
        raise ValueError(f"{what} needs a symmetric graph")


def _priority_counts(G: Graph, before: np.ndarray) -> np.ndarray:
    """Number of neighbors ordered before each vertex (``before`` is a rank)."""
    b = G.edge_arrays()
    earlier = before[b.dst] < before[b.src]
    return np.bincount(b.src[earlier], minlength=G.n).astype(np.int64)


# ---------------------------------------------------------------------------
# maximal independent set


def mis(G: Graph, rng: RandomSource | int | None = None) -> np.ndarray:
    """Boolean membership of the greedy MIS over a random vertex order.

    Each vertex counts its earlier-ordered neighbors; vertices whose count
    reaches zero are roots and join the set. Roots knock out their
    neighbors, and each knocked-out vertex decrements the counts of its
    later-ordered neighbors.
    """
    _require_symmetric(G, "maximal independent set")
    rng = as_rng(rng)
    n = G.n
    rank = np.empty(n, dtype=np.int64)
    rank[rng.permutation(n)] = np.arange(n)
    return _rootset_mis(G, rank)


def _rootset_mis(G: Graph, rank: np.ndarray) -> np.ndarray:
    n = G.n
    count = _priority_counts(G, rank)
    state = np.zeros(n, dtype=np.int8)  # 0 undecided, 1 in set, 2 removed
    roots = np.flatnonzero(count == 0)
    while roots.size:
        state[roots] = 1
        nb = G.gather(roots)
        hit = np.unique(nb.dst[state[nb.dst] == 0])
        state[hit] = 2
        out = G.gather(hit)
        later = (state[out.dst] == 0) & (rank[out.src] < rank[out.dst])
        tgt = out.dst[later]
        prior = fetch_and_add_batch(count, tgt, -1)
        roots = np.unique(tgt[prior == 1])
    return state == 1


# ---------------------------------------------------------------------------
# maximal matching


class Matching(NamedTuple):
    """Matched edges as ``(u, v)`` rows with ``u < v`` and a partner per vertex (-1 if free)."""

    edges: np.ndarray
    partner: np.ndarray


def _greedy_rounds(eu, ev, rank, matched, partner) -> list[np.ndarray]:
    """Parallel greedy: an edge joins when it is the best-ranked live edge at both ends."""
    taken: list[np.ndarray] = []
    idx = np.arange(eu.size, dtype=np.int64)
    live = ~matched[eu] & ~matched[ev]
    idx = idx[live]
    n = matched.size
    big = np.iinfo(np.int64).max
    while idx.size:
        best = np.full(n, big, dtype=np.int64)
        r = rank[idx]
        priority_write_batch(best, eu[idx], r, "min")
        priority_write_batch(best, ev[idx], r, "min")
        win = (best[eu[idx]] == r) & (best[ev[idx]] == r)
        w = idx[win]
        matched[eu[w]] = True
        matched[ev[w]] = True
        partner[eu[w]] = ev[w]
        partner[ev[w]] = eu[w]
        taken.append(w)
        idx = idx[~matched[eu[idx]] & ~matched[ev[idx]]]
    return taken


def maximal_matching(G: Graph, rng: RandomSource | int | None = None) -> Matching:
    """Greedy maximal matching over a random edge order.

    A few filtering rounds process the ``3n/2`` best-ranked remaining edges
    and then discard edges touching matched vertices; the rest is handled
    in one final pass.
    """
    _require_symmetric(G, "maximal matching")
    rng = as_rng(rng)
    e = G.undirected_edges()
    eu, ev = e.src, e.dst
    m = eu.size
    rank = np.empty(m, dtype=np.int64)
    rank[rng.permutation(m)] = np.arange(m)
    order = np.argsort(rank, kind="stable")
    matched = np.zeros(G.n, dtype=bool)
    partner = np.full(G.n, -1, dtype=np.int64)
    taken: list[np.ndarray] = []
    remaining = order
    prefix_len = max(1, (3 * G.n) // 2)
    for _ in range(MM_FILTER_ROUNDS):
        if remaining.size <= prefix_len:
            break
        prefix, rest = remaining[:prefix_len], remaining[prefix_len:]
        taken += [prefix[t] for t in _greedy_rounds(eu[prefix], ev[prefix], rank[prefix], matched, partner)]
        remaining = rest[~matched[eu[rest]] & ~matched[ev[rest]]]
    taken += [remaining[t] for t in _greedy_rounds(eu[remaining], ev[remaining], rank[remaining], matched, partner)]
    pick = np.sort(np.concatenate(taken)) if taken else np.empty(0, dtype=np.int64)
    return Matching(np.stack([eu[pick], ev[pick]], axis=1).reshape(-1, 2), partner)


# ---------------------------------------------------------------------------
# coloring


def llf_rank(G: Graph, perm_rank: np.ndarray) -> np.ndarray:
    """Position of every vertex in largest-log-degree-first order, ties by the permutation."""
    logdeg = np.ceil(np.log2(G.degrees() + 1.0)).astype(np.int64)
    order = np.lexsort((perm_rank, -logdeg))
    rank = np.empty(G.n, dtype=np.int64)
    rank[order] = np.arange(G.n)
    return rank


def _mex(owner: np.ndarray, colors: np.ndarray, k: int) -> np.ndarray:
    """Smallest color absent among ``colors`` of each owner in ``range(k)``."""
    out = np.zeros(k, dtype=np.int64)
    if owner.size == 0:
        return out
    pairs = np.unique(owner * (colors.max() + 2) + colors)
    po = pairs // (colors.max() + 2)
    pc = pairs % (colors.max() + 2)
    starts = np.flatnonzero(np.r_[True, po[1:] != po[:-1]])
    lens = np.diff(np.r_[starts, po.size])
    j = np.arange(po.size) - np.repeat(starts, lens)
    gap = pc != j
    first_gap = np.full(k, -1, dtype=np.int64)
    gi = np.flatnonzero(gap)
    # first mismatch per owner, else the owner's group length
    fo = po[gi]
    uo, fi = np.unique(fo, return_index=True)
    first_gap[uo] = j[gi[fi]]
    out[po[starts]] = lens
    has_gap = first_gap >= 0
    out[has_gap] = first_gap[has_gap]
    return out


def coloring(G: Graph, rng: RandomSource | int | None = None, heuristic: str = "LLF") -> np.ndarray:
    """Jones-Plassmann coloring; returns a color per vertex.

    Vertices are ordered largest-log-degree first (ties by a random
    permutation) or, with ``heuristic="FIRST"``, by vertex id. A vertex is
    colored with the smallest color missing among its neighbors once all
    of its earlier-ordered neighbors are colored.
    """
    _require_symmetric(G, "coloring")
    rng = as_rng(rng)
    n = G.n
    if heuristic == "LLF":
        perm_rank = np.empty(n, dtype=np.int64)
        perm_rank[rng.permutation(n)] = np.arange(n)
        rank = llf_rank(G, perm_rank)
    elif heuristic == "FIRST":
        rank = np.arange(n, dtype=np.int64)
    else:
        raise ValueError(f"unknown coloring heuristic {heuristic!r}")
    return _jones_plassmann(G, rank)


def _jones_plassmann(G: Graph, rank: np.ndarray) -> np.ndarray:
    n = G.n
    color = np.full(n, -1, dtype=np.int64)
    count = _priority_counts(G, rank)
    roots = np.flatnonzero(count == 0)
    while roots.size:
        nb = G.gather(roots)
        colored = color[nb.dst] >= 0
        local = np.searchsorted(roots, nb.src[colored])
        color[roots] = _mex(local, color[nb.dst[colored]], roots.size)
        later = rank[nb.dst] > rank[nb.src]
        tgt = nb.dst[later]
        prior = fetch_and_add_batch(count, tgt, -1)
        roots = np.unique(tgt[prior == 1])
    return color


# ---------------------------------------------------------------------------
# set cover


def _bucket_of(D: np.ndarray, eps: float) -> np.ndarray:
    """``floor(log_{1+eps} D)`` computed exactly for positive ``D``; NULL for zero."""
    out = np.full(D.size, NULL_BUCKET, dtype=np.int64)
    pos = D > 0
    d = D[pos].astype(np.float64)
    base = math.log1p(eps)
    b = np.floor(np.log(d) / base).astype(np.int64)
    b = np.maximum(b, 0)
    # correct floating-point drift at bucket boundaries
    b[np.power(1.0 + eps, b + 1) <= d] += 1
    b[np.power(1.0 + eps, b) > d] -= 1
    out[pos] = b
    return out


def default_universe(G: Graph) -> np.ndarray:
    """Elements that some set can cover: vertices with an incoming edge."""
    indeg = np.bincount(G.edges, minlength=G.n) if G.m else np.zeros(G.n, dtype=np.int64)
    return indeg > 0


def set_cover(
    G: Graph,
    epsilon: float = DEFAULT_EPSILON,
    rng: RandomSource | int | None = None,
    universe=None,
    *,
    check_rounds: bool = False,
) -> np.ndarray:
    """Sorted ids of chosen sets covering the element universe.

    ``G`` encodes the instance with an edge from each set to every element it
    contains. Sets are bucketed by ``floor(log_{1+eps}`` of their uncovered
    count and processed from the largest bucket down. In each round, the
    active sets draw fresh random priorities, every uncovered element is
    claimed by its best-priority active neighbor, and a set joins the
    cover when it claimed at least ``ceil((1+eps)^max(b-1, 0))`` elements;
    all of its uncovered elements are then covered. The other sets are
    re-bucketed by their remaining uncovered counts.

    Parameters
    ----------
    universe : boolean mask of elements to cover; defaults to every vertex
        with an incoming edge. Uncoverable elements raise ``ValueError``.
    check_rounds : assert the per-round acquisition bound while running.
    """
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    rng = as_rng(rng)
    n = G.n
    need = default_universe(G) if universe is None else np.asarray(universe, dtype=bool)
    if need.size != n:
        raise ValueError("universe mask needs one entry per vertex")
    coverable = default_universe(G)
    if np.any(need & ~coverable):
        bad = int(np.flatnonzero(need & ~coverable)[0])
        raise ValueError(f"element {bad} belongs to no set")
    uncovered = need.copy()
    deg = G.degrees()

    def uncovered_count(sets: np.ndarray) -> np.ndarray:
        nb = G.gather(sets)
        hit = uncovered[nb.dst]
        return np.bincount(np.repeat(np.arange(sets.size), deg[sets])[hit], minlength=sets.size)

    all_sets = np.arange(n, dtype=np.int64)
    D = uncovered_count(all_sets)
    B = make_buckets(n, _bucket_of(D, epsilon), "decreasing")
    chosen: list[np.ndarray] = []
    owner = np.full(n, np.iinfo(np.int64).max, dtype=np.int64)
    while (nxt := B.next_bucket()) is not None:
        b, S = nxt
        sets = S.members()
        D = uncovered_count(sets)
        nb_key = _bucket_of(D, epsilon)
        stale = nb_key != b
        if np.any(stale):
            # sets that lost elements since they were bucketed go back
            B.restore(sets[stale], nb_key[stale])
        active = sets[~stale]
        if active.size == 0:
            continue
        prio = rng.bits(active.size).astype(np.int64) & np.iinfo(np.int64).max
        # break equal hash draws by set id so claims stay a strict order
        order = np.lexsort((active, prio))
        rank = np.empty(active.size, dtype=np.int64)
        rank[order] = np.arange(active.size)
        nb = G.gather(active)
        local = np.repeat(np.arange(active.size), deg[active])
        open_el = uncovered[nb.dst]
        el, who = nb.dst[open_el], local[open_el]
        owner[el] = np.iinfo(np.int64).max
        priority_write_batch(owner, el, rank[who], "min")
        won_edge = owner[el] == rank[who]
        won = np.bincount(who[won_edge], minlength=active.size)
        need_b = math.ceil((1.0 + epsilon) ** max(b - 1, 0) - 1e-9)
        winner = won >= need_b
        winners = active[winner]
        if check_rounds:
            assert np.all(won[winner] >= need_b)
        if winners.size:
            chosen.append(winners)
            wn = G.gather(winners)
            uncovered[wn.dst] = False
        losers = active[~winner]
        if losers.size:
            B.restore(losers, _bucket_of(uncovered_count(losers), epsilon))
    if np.any(uncovered):
        raise RuntimeError("set cover finished with uncovered elements")
    return np.sort(np.concatenate(chosen)) if chosen else np.empty(0, dtype=np.int64)
