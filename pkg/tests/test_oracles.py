import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from instances import FAMILIES, instance
from pargraph.generators import path, torus3d
from pargraph.graph import directed_graph, symmetric_graph
from pargraph.oracles import OracleRefusal, canonical_labels, oracle_solve, verify
from pargraph.oracles import reference as ref
from pargraph.problems import PROBLEMS, solve
from strategies import random_graph

K3 = symmetric_graph(3, [(0, 1), (1, 2), (0, 2)])


def test_oracle_examples():
    assert oracle_solve("bfs", path(4), {"src": 0}).tolist() == [0, 1, 2, 3]
    K4 = symmetric_graph(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])
    assert oracle_solve("tc", K4).tolist() == [4]
    assert oracle_solve("kcore", torus3d(4)).tolist() == [6] * 64


def test_verify_examples():
    assert verify("coloring", K3, {}, 0, np.array([0, 1, 2])).passed
    rep = verify("mis", K3, {}, 0, np.array([True, True, False]))
    assert not rep.passed and rep.detail == "adjacent pair (0,1)"
    G = random_graph(100, 150, 3)
    assert verify("connectivity", G, {}, 0, solve("connectivity", G, {}, 0)).passed


def test_canonical_labels():
    assert canonical_labels([7, 7, 3, 3, 7]).tolist() == [0, 0, 2, 2, 0]
    assert canonical_labels([]).tolist() == []


@pytest.mark.parametrize("problem", sorted(PROBLEMS))
@pytest.mark.parametrize("family", FAMILIES)
def test_verify_accepts_oracle_output(problem, family):
    for seed in range(2):
        G, params = instance(problem, family, 17 if problem == "densest-subgraph" else 120, seed)
        if problem == "densest-subgraph" and G.n > ref.DENSEST_MAX_N:
            # the smallest torus has 27 vertices, beyond the brute-force guard
            with pytest.raises(OracleRefusal):
                oracle_solve(problem, G, params, seed)
            continue
        out = oracle_solve(problem, G, params, seed)
        rep = verify(problem, G, params, seed, out)
        assert rep.passed, rep.detail
        assert rep.oracle_seconds >= 0


@given(st.integers(0, 2**31), st.sampled_from(sorted(PROBLEMS)))
def test_verify_accepts_parallel_output_on_random_graphs(seed, problem):
    G, params = instance(problem, FAMILIES[seed % len(FAMILIES)], 12 + seed % 40, seed)
    rep = verify(problem, G, params, seed, solve(problem, G, params, seed))
    assert rep.passed, rep.detail


def corrupt_cases():
    G = random_graph(30, 60, 1)
    W = random_graph(30, 60, 1, weighted=True)
    yield "bfs", G, {}, lambda o: o + (np.arange(o.size) == 5), "differs"
    yield "pagerank", G, {}, lambda o: o * 1.001, "differs"
    yield "connectivity", G, {}, lambda o: np.arange(o.size), "partition"
    yield "mis", G, {}, lambda o: np.zeros_like(o), "could be added"
    yield "mm", G, {}, lambda o: o[1:], "could be added"
    yield "coloring", G, {}, lambda o: np.zeros_like(o), "monochromatic"
    yield "spanning-forest", G, {}, lambda o: o[1:], "edges, expected"
    yield "msf", W, {}, lambda o: np.column_stack([o[:, :2], o[:, 2] + 1]), "wrong weight"
    yield "spanner", G, {}, lambda o: o[:0], "disconnects"
    yield "set-cover", directed_graph(4, [(0, 2), (1, 3)]), {}, lambda o: o[:1], "uncovered"
    yield "densest-subgraph", K3, {}, lambda o: o[:1], "below optimum"
    yield "ldd", path(10), {}, lambda o: np.where(np.isin(np.arange(10), [0, 9]), 0, np.arange(10)), "not connected"
    yield "tc", K3, {}, lambda o: o + 1, "differs"


@pytest.mark.parametrize("problem, G, params, damage, message", list(corrupt_cases()),
                         ids=[c[0] for c in corrupt_cases()])
def test_verify_rejects_damaged_output(problem, G, params, damage, message):
    out = damage(solve(problem, G, params, 0))
    rep = verify(problem, G, params, 0, out)
    assert not rep.passed and message in rep.detail


def test_size_guards_refuse():
    big = random_graph(30, 60, 0)
    with pytest.raises(OracleRefusal):
        ref.densest_brute(big)
    sets = directed_graph(50, [(i, 25 + i) for i in range(25)])
    with pytest.raises(OracleRefusal):
        ref.set_cover_opt(sets)
    with pytest.raises(OracleRefusal):
        ref.triangles_brute(random_graph(600, 10, 0))
    # verification falls back to the degeneracy bound above the brute-force guard
    assert verify("densest-subgraph", big, {}, 0, solve("densest-subgraph", big, {}, 0)).passed


def test_greedy_set_cover_oracle_examples():
    G = directed_graph(6, [(0, 3), (0, 4), (1, 4), (1, 5), (2, 3), (2, 4), (2, 5)])
    assert ref.greedy_set_cover(G).tolist() == [2]
    assert ref.set_cover_opt(G) == 1
