import networkx as nx
import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from pargraph.algorithms import coloring, maximal_matching, mis, set_cover
from pargraph.graph import directed_graph, symmetric_graph
from pargraph.oracles import reference as ref
from pargraph.oracles import verify
from pargraph.primitives import RandomSource
from strategies import graphs, random_graph

K3 = [(0, 1), (1, 2), (0, 2)]


def star_graph(n):
    return symmetric_graph(n, [(0, i) for i in range(1, n)])


# --- MIS -------------------------------------------------------------------


def test_mis_examples():
    assert mis(symmetric_graph(3, K3), 0).sum() == 1
    assert mis(symmetric_graph(4, []), 0).tolist() == [True] * 4


@given(graphs(max_n=50, max_m=200), st.integers(0, 2**31))
def test_mis_equals_greedy_for_same_permutation(G, seed):
    got = mis(G, seed)
    assert np.array_equal(got, ref.greedy_mis(G, RandomSource(seed).permutation(G.n)))
    assert verify("mis", G, {}, seed, got).passed


def test_greedy_mis_oracle_is_maximal_independent_per_networkx():
    G = random_graph(200, 800, 1)
    H = nx.Graph()
    H.add_nodes_from(range(200))
    H.add_edges_from(ref.undirected_pairs(G))
    S = set(np.flatnonzero(ref.greedy_mis(G, range(200))).tolist())
    assert nx.is_dominating_set(H, S)
    assert not any(H.has_edge(u, v) for u in S for v in S)


# --- matching --------------------------------------------------------------


def test_matching_examples():
    M = maximal_matching(symmetric_graph(2, [(0, 1)]), 0)
    assert M.edges.tolist() == [[0, 1]] and M.partner.tolist() == [1, 0]
    for seed in range(10):
        assert len(maximal_matching(symmetric_graph(3, K3), seed).edges) == 1


def check_matching(G, M):
    used = set()
    for u, v in M.edges.tolist():
        assert u not in used and v not in used
        used |= {u, v}
        assert M.partner[u] == v and M.partner[v] == u
    for u, v in ref.undirected_pairs(G):
        assert u in used or v in used
    assert all((M.partner[x] == -1) == (x not in used) for x in range(G.n))


@given(graphs(max_n=50, max_m=200), st.integers(0, 2**31))
def test_matching_equals_greedy_for_same_order(G, seed):
    M = maximal_matching(G, seed)
    check_matching(G, M)
    m = len(ref.undirected_pairs(G))
    assert np.array_equal(M.edges.reshape(-1, 2), ref.greedy_matching(G, RandomSource(seed).permutation(m)).reshape(-1, 2))


def test_matching_filter_rounds_on_dense_graph():
    # m well above 3n/2 forces the prefix filtering rounds
    G = random_graph(300, 6000, 2)
    m = len(ref.undirected_pairs(G))
    for seed in range(20):
        M = maximal_matching(G, seed)
        check_matching(G, M)
        assert np.array_equal(M.edges, ref.greedy_matching(G, RandomSource(seed).permutation(m)))


# --- coloring --------------------------------------------------------------


def test_coloring_examples():
    assert sorted(coloring(symmetric_graph(3, K3), 0).tolist()) == [0, 1, 2]
    for h in ("LLF", "FIRST"):
        assert np.unique(coloring(star_graph(7), 3, h)).size == 2
    with pytest.raises(ValueError):
        coloring(symmetric_graph(3, K3), 0, "SLL")


@given(graphs(max_n=50, max_m=250), st.integers(0, 2**31))
def test_coloring_equals_sequential_jones_plassmann(G, seed):
    c = coloring(G, seed)
    for u, v in ref.undirected_pairs(G):
        assert c[u] != c[v]
    delta = int(G.degrees().max()) if G.n else 0
    assert c.max() < delta + 1
    order = ref.llf_order(G, RandomSource(seed).permutation(G.n))
    assert np.array_equal(c, ref.greedy_coloring(G, order))
    assert np.array_equal(coloring(G, seed, "FIRST"), ref.greedy_coloring(G, range(G.n)))


# --- set cover -------------------------------------------------------------


def test_set_cover_dominating_set():
    # sets 0..2 over elements 3..5: A={3,4}, B={4,5}, C={3,4,5}
    G = directed_graph(6, [(0, 3), (0, 4), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
    for seed in range(10):
        assert set_cover(G, 0.01, seed).tolist() == [2]


def test_set_cover_disjoint_singletons():
    G = directed_graph(8, [(i, i + 4) for i in range(4)])
    assert set_cover(G, 0.01, 0).tolist() == [0, 1, 2, 3]


def test_set_cover_rejects_uncoverable_universe():
    G = directed_graph(3, [(0, 1)])
    with pytest.raises(ValueError):
        set_cover(G, 0.01, 0, universe=np.array([False, True, True]))


def covers(G, chosen, universe):
    got = np.zeros(G.n, dtype=bool)
    for s in chosen:
        got[G.neighbors(s)] = True
    return np.all(got[universe])


@st.composite
def instances(draw, elements=15, max_sets=12):
    k = draw(st.integers(1, max_sets))
    sets = [draw(st.sets(st.integers(0, elements - 1), min_size=1, max_size=elements)) for _ in range(k)]
    pairs = [(i, k + e) for i, s in enumerate(sets) for e in s]
    return directed_graph(k + elements, pairs)


@given(instances(), st.integers(0, 2**31), st.sampled_from([0.01, 0.5]))
def test_set_cover_valid_and_within_harmonic_bound(G, seed, eps):
    chosen = set_cover(G, eps, seed, check_rounds=True)
    universe = ref.coverable(G)
    assert covers(G, chosen, universe)
    opt = ref.set_cover_opt(G)
    h = sum(1 / i for i in range(1, sum(universe) + 1))
    assert len(chosen) <= h * opt + 1e-9
    assert verify("set-cover", G, {"epsilon": eps}, seed, chosen).passed


def test_set_cover_over_fifty_seeds_on_fifteen_elements():
    rng = np.random.default_rng(0)
    H15 = sum(1 / i for i in range(1, 16))
    for seed in range(50):
        k = 10
        pairs = [(i, k + e) for i in range(k) for e in range(15) if rng.random() < 0.25]
        pairs += [(int(rng.integers(0, k)), k + e) for e in range(15)]
        G = directed_graph(k + 15, pairs)
        chosen = set_cover(G, 0.01, seed)
        assert covers(G, chosen, ref.coverable(G))
        assert len(chosen) <= H15 * ref.set_cover_opt(G)


def test_neighborhood_cover_from_symmetric_graph():
    G = random_graph(300, 900, 4)
    chosen = set_cover(G, 0.01, 1)
    universe = G.degrees() > 0
    assert covers(G, chosen, universe)
    assert verify("set-cover", G, {}, 1, chosen).passed
