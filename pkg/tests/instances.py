"""Benchmark instances for every problem, drawn from the generator families."""

import numpy as np

from pargraph import generators as gen
from pargraph.graph import Graph, build_csr
from pargraph.problems import PROBLEMS

FAMILIES = ("er", "rmat", "torus", "path", "star")


def base_graph(family: str, n: int, seed: int, *, directed: bool) -> Graph:
    """A graph with at most ``n`` vertices from one generator family."""
    if family == "er":
        return gen.er(n, min(1.0, 6.0 / max(n, 1)), directed=directed, seed=seed)
    if family == "rmat":
        scale = max(1, int(np.log2(n)))
        return gen.rmat(scale, 4, directed=directed, seed=seed)
    if family == "torus":
        s = max(3, int(round(n ** (1 / 3))))
        while s**3 > n and s > 3:
            s -= 1
        return gen.torus3d(s)
    if family == "path":
        return gen.path(n)
    if family == "star":
        return gen.star(n)
    raise ValueError(family)


def signed_weights(G: Graph, seed: int) -> Graph:
    """Log-range weights with roughly a fifth shifted negative (directed graphs only)."""
    W = gen.add_weights(G, seed)
    b = W.edge_arrays()
    flip = np.random.default_rng(seed).random(b.w.size) < 0.2
    return build_csr(G.n, b.src, b.dst, np.where(flip, -b.w // 2, b.w))


def neighborhood_cover(G: Graph) -> Graph:
    """Directed set-to-element instance: set v contains the neighbors of v."""
    b = G.edge_arrays()
    return build_csr(G.n, b.src, b.dst)


def instance(problem: str, family: str, n: int, seed: int) -> tuple[Graph, dict]:
    """(graph, params) suitable for ``problem``."""
    p = PROBLEMS[problem]
    directed = not p.symmetric and problem not in ("set-cover",)
    G = base_graph(family, n, seed, directed=directed and family in ("er", "rmat"))
    if problem == "set-cover":
        G = neighborhood_cover(G)
    elif problem == "bellman-ford":
        G = signed_weights(G, seed) if not G.symmetric else gen.add_weights(G, seed)
    elif p.weighted:
        G = gen.add_weights(G, seed)
    params = {}
    if p.uses_source:
        params["src"] = seed % G.n
    return G, params
