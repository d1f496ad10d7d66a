import itertools

import networkx as nx
import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from pargraph.algorithms import densest_subgraph, kcore, pagerank, triangle_count
from pargraph.algorithms.structure import induced_density, orient
from pargraph.generators import torus3d
from pargraph.graph import directed_graph, symmetric_graph
from pargraph.oracles import reference as ref
from pargraph.parallel import workers
from strategies import graphs, random_graph


def complete(n):
    return symmetric_graph(n, list(itertools.combinations(range(n), 2)))


def star_graph(n):
    return symmetric_graph(n, [(0, i) for i in range(1, n)])


def nx_graph(G):
    H = nx.Graph()
    H.add_nodes_from(range(G.n))
    H.add_edges_from(ref.undirected_pairs(G))
    return H


# --- k-core ----------------------------------------------------------------


def test_kcore_examples():
    assert kcore(complete(3)).coreness.tolist() == [2, 2, 2]
    assert kcore(star_graph(6)).coreness.tolist() == [1] * 6
    c = kcore(torus3d(10))
    assert set(c.coreness.tolist()) == {6} and c.rounds == 1 and c.k_max == 6


@given(graphs(max_n=60, max_m=250))
def test_kcore_matches_matula_beck(G):
    c = kcore(G)
    want, kmax = ref.matula_beck(G)
    assert np.array_equal(c.coreness, want) and c.k_max == kmax
    assert np.all(c.coreness <= G.degrees())
    # the vertices of coreness >= k induce min degree >= k
    for k in range(1, kmax + 1):
        keep = c.coreness >= k
        for v in np.flatnonzero(keep):
            assert np.count_nonzero(keep[G.neighbors(v)]) >= k


def test_matula_beck_oracle_matches_networkx():
    for seed in range(5):
        G = random_graph(200, 900, seed)
        want = nx.core_number(nx_graph(G))
        assert ref.matula_beck(G)[0].tolist() == [want[v] for v in range(200)]


def test_kcore_extraction_keys_non_decreasing():
    G = random_graph(300, 1500, 3)
    c = kcore(G)
    assert c.rounds >= np.unique(c.coreness).size


# --- densest subgraph ------------------------------------------------------


def test_densest_examples():
    eps = 0.001
    r = densest_subgraph(complete(4), eps)
    assert 1.5 / (2 * (1 + eps)) <= r.density <= 1.5
    r = densest_subgraph(symmetric_graph(2, [(0, 1)]), eps)
    assert r.density == 0.5 and r.vertices.tolist() == [0, 1]


@given(graphs(max_n=16, max_m=60, min_n=1), st.sampled_from([0.0, 0.001, 0.5]))
def test_densest_guarantee_vs_brute_force(G, eps):
    r = densest_subgraph(G, eps)
    best, _ = ref.densest_brute(G)
    assert r.density >= best / (2 * (1 + eps)) - 1e-12
    assert r.density == induced_density(G, r.vertices)
    if G.m:
        assert r.vertices.size > 0


def test_densest_brute_agrees_with_itertools_scan():
    G = random_graph(10, 25, 2)
    pairs = ref.undirected_pairs(G)
    best = 0.0
    for k in range(1, 11):
        for S in itertools.combinations(range(10), k):
            s = set(S)
            best = max(best, sum(1 for u, v in pairs if u in s and v in s) / k)
    assert abs(ref.densest_brute(G)[0] - best) < 1e-12


# --- triangles -------------------------------------------------------------


def test_triangle_examples():
    assert triangle_count(complete(3)) == 1
    assert triangle_count(complete(4)) == 4
    assert triangle_count(star_graph(8)) == 0
    assert triangle_count(torus3d(10)) == 0


@given(graphs(max_n=40, max_m=250))
def test_triangles_match_brute_force(G):
    want = ref.triangles_brute(G)
    assert triangle_count(G) == want
    assert triangle_count(G.compress(3)) == want
    assert ref.triangles_by_sets(G) == want


@given(graphs(max_n=30, max_m=150))
def test_orientation_is_acyclic(G):
    D = orient(G)
    assert D.m * 2 == G.m
    H = nx.DiGraph()
    H.add_nodes_from(range(G.n))
    b = D.edge_arrays()
    H.add_edges_from(zip(b.src.tolist(), b.dst.tolist()))
    assert nx.is_directed_acyclic_graph(H)


def test_triangle_oracle_matches_networkx():
    G = random_graph(150, 1500, 1)
    assert ref.triangles_brute(G) == sum(nx.triangles(nx_graph(G)).values()) // 3


# --- pagerank --------------------------------------------------------------


def test_pagerank_examples():
    assert pagerank(symmetric_graph(1, [])).ranks.tolist() == [1.0]
    r = pagerank(directed_graph(3, [(0, 1), (1, 2), (2, 0)])).ranks
    assert np.allclose(r, 1 / 3, atol=1e-15)


@given(graphs(max_n=40, max_m=200, symmetric=False), st.sampled_from([0.5, 0.85, 1.0]))
def test_pagerank_matches_power_iteration(G, gamma):
    res = pagerank(G, gamma, 1e-10, 200)
    want, iters = ref.power_iteration(G, gamma, 1e-10, 200)
    assert np.max(np.abs(res.ranks - want)) <= 1e-9
    assert abs(res.ranks.sum() - 1) <= 1e-6
    assert np.all(res.ranks >= (1 - gamma) / G.n - 1e-15)


def test_pagerank_mass_each_iteration():
    G = random_graph(300, 900, 5, symmetric=False)
    for t in range(1, 15):
        assert abs(pagerank(G, fixed_iterations=t).ranks.sum() - 1) <= 1e-6


def test_power_iteration_matches_networkx():
    G = random_graph(100, 400, 6, symmetric=False)
    H = nx.DiGraph()
    H.add_nodes_from(range(100))
    b = G.edge_arrays()
    H.add_edges_from(zip(b.src.tolist(), b.dst.tolist()))
    want = nx.pagerank(H, alpha=0.85, tol=1e-14, max_iter=1000)
    got, _ = ref.power_iteration(G, 0.85, 1e-13, 1000)
    assert np.allclose(got, [want[v] for v in range(100)], atol=1e-10)


def test_pagerank_bitwise_identical_across_workers():
    G = random_graph(40000, 200000, 7, symmetric=False)
    outs = []
    for k in (1, 2, 4):
        with workers(k):
            outs.append(pagerank(G).ranks.tobytes())
    assert outs[0] == outs[1] == outs[2]
