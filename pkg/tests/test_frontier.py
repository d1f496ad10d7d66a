import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from pargraph.frontier import TraversalStats, VertexSubset, edge_map, edge_map_blocked, vertex_map
from pargraph.generators import star
from pargraph.parallel import workers
from pargraph import primitives as P
from strategies import graphs, random_graph

MODES = ("sparse", "dense", "blocked")


def visit_run(G, frontier, mode, visited0, block_size=7, early_exit=True):
    visited = visited0.copy()
    F = lambda s, d, w: P.test_and_set_batch(visited, d)  # noqa: E731
    C = lambda ids: visited[ids] == 0  # noqa: E731
    out = edge_map(G, VertexSubset(G.n, ids=frontier), F, C, mode=mode, block_size=block_size,
                   early_exit=early_exit)
    return set(out.ids.tolist()), visited


def test_star_center_reaches_all_leaves():
    G = star(6)
    for mode in MODES:
        out = edge_map(G, VertexSubset.single(6, 0), lambda s, d, w: np.ones(s.size, bool), mode=mode)
        assert sorted(out.ids.tolist()) == [1, 2, 3, 4, 5]


def test_false_condition_gives_empty():
    G = random_graph(20, 60, 0)
    for mode in MODES:
        out = edge_map(G, VertexSubset.all(20), lambda s, d, w: np.ones(s.size, bool),
                       lambda ids: np.zeros(ids.size, bool), mode=mode)
        assert len(out) == 0


@given(graphs(max_n=40, max_m=160, symmetric=False), st.integers(0, 2**31))
def test_modes_agree_with_test_and_set(G, seed):
    rng = np.random.default_rng(seed)
    frontier = np.flatnonzero(rng.random(G.n) < 0.4)
    visited0 = (rng.random(G.n) < 0.2).astype(np.int8)
    results = [visit_run(G, frontier, m, visited0) for m in MODES]
    results.append(visit_run(G, frontier, "dense", visited0, early_exit=False))
    for r in results[1:]:
        assert r[0] == results[0][0]
        assert np.array_equal(r[1], results[0][1])
    # and the set is what a sequential scan predicts
    want = {v for u in frontier.tolist() for v in G.neighbors(u).tolist() if visited0[v] == 0}
    assert results[0][0] == want


@given(graphs(max_n=30, max_m=120, symmetric=False), st.integers(0, 2**31))
def test_modes_agree_with_pure_predicate_and_payload(G, seed):
    rng = np.random.default_rng(seed)
    frontier = np.flatnonzero(rng.random(G.n) < 0.5)
    cond = rng.random(G.n) < 0.7
    F = lambda s, d, w: ((s + 2 * d) % 3 != 0, s)  # noqa: E731
    outs = [edge_map(G, frontier, F, lambda ids: cond[ids], mode=m, block_size=5) for m in MODES]
    sets = [set(o.ids.tolist()) for o in outs]
    assert sets[0] == sets[1] == sets[2]
    for o in outs:
        # each payload names a frontier in-neighbor that passed F
        if len(o) == 0:
            continue
        for v, p in zip(o.ids.tolist(), o.payload.tolist()):
            assert p in frontier and v in G.neighbors(p) and (p + 2 * v) % 3 != 0


def test_in_direction_follows_reverse_edges():
    from pargraph.graph import directed_graph
    G = directed_graph(3, [(0, 1), (2, 1)])
    out = edge_map(G, [1], lambda s, d, w: np.ones(s.size, bool), direction="in", mode="sparse")
    assert sorted(out.ids.tolist()) == [0, 2]


def test_sparse_touches_exactly_frontier_degree():
    G = random_graph(100, 500, 3)
    U = np.arange(0, 100, 3)
    stats = TraversalStats()
    edge_map(G, U, lambda s, d, w: np.ones(s.size, bool), mode="sparse", stats=stats)
    assert stats.edges_touched == int(G.degrees()[U].sum())


def test_auto_mode_switches_to_dense():
    G = random_graph(100, 500, 4)
    stats = TraversalStats()
    edge_map(G, VertexSubset.all(100), lambda s, d, w: np.ones(s.size, bool), stats=stats)
    edge_map(G, [0], lambda s, d, w: np.ones(s.size, bool), stats=stats)
    assert stats.modes == ["dense", "sparse"]


def test_blocked_counts_blocks_and_writes():
    stats = TraversalStats()
    out = edge_map_blocked(star(5), VertexSubset.single(5, 1), lambda s, d, w: np.ones(s.size, bool),
                           block_size=2, stats=stats)
    assert len(out) == 1 and stats.blocks == 1
    G = star(41)  # center degree 40
    stats = TraversalStats()
    out = edge_map_blocked(G, [0], lambda s, d, w: np.ones(s.size, bool), block_size=4, stats=stats)
    assert stats.blocks == 10 and len(out) == 40
    stats = TraversalStats()
    empty = edge_map_blocked(G, VertexSubset.empty(41), lambda s, d, w: np.ones(s.size, bool), stats=stats)
    assert len(empty) == 0 and stats.blocks == 0
    stats = TraversalStats()
    edge_map_blocked(G, [0], lambda s, d, w: d % 2 == 0, block_size=4, stats=stats)
    assert stats.writes == 20


def test_blocked_matches_sparse_over_seeds():
    for seed in range(100):
        G = random_graph(60, 240, seed, symmetric=seed % 2 == 0)
        rng = np.random.default_rng(seed)
        U = np.flatnonzero(rng.random(60) < 0.3)
        v0 = (rng.random(60) < 0.1).astype(np.int8)
        assert visit_run(G, U, "blocked", v0, block_size=int(rng.integers(1, 20)))[0] == \
            visit_run(G, U, "sparse", v0)[0]


def test_modes_agree_across_worker_counts():
    G = random_graph(500, 4000, 9, symmetric=False)
    U = np.arange(0, 500, 2)
    v0 = np.zeros(500, dtype=np.int8)
    base = visit_run(G, U, "sparse", v0)
    for k in (1, 3):
        with workers(k):
            for m in MODES:
                got = visit_run(G, U, m, v0, block_size=64)
                assert got[0] == base[0] and np.array_equal(got[1], base[1])


def test_vertex_map_examples():
    U = VertexSubset(10, ids=[1, 2, 3])
    assert vertex_map(U, lambda v: v % 2 == 0).ids.tolist() == [2]
    assert len(vertex_map(VertexSubset.empty(4), lambda v: v > 0)) == 0


@given(st.sets(st.integers(0, 49)))
def test_vertex_map_equals_filter_and_representations_agree(members):
    ids = np.array(sorted(members), dtype=np.int64)
    U = VertexSubset(50, ids=ids)
    assert vertex_map(U, lambda v: v % 3 == 1).ids.tolist() == [v for v in ids.tolist() if v % 3 == 1]
    D = VertexSubset(50, mask=U.to_dense().mask)
    assert D.is_dense and len(D) == len(U)
    assert sorted(D.ids.tolist()) == ids.tolist()
    assert all((v in D) == (v in members) for v in range(50))
