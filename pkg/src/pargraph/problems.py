"""Registry of the twenty benchmark problems.

Every problem runs one algorithm and reduces its result to a canonical
numpy array, so outputs can be checksummed, compared across graph
representations and handed to the verifier.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any, Callable

import numpy as np

from . import algorithms as alg
from .graph import Graph
from .primitives import RandomSource

Runner = Callable[[Graph, dict, RandomSource], np.ndarray]


@dataclass(frozen=True)
class Problem:
    """A benchmark problem.

    Attributes
    ----------
    name : registry key used on the command line.
    run : ``run(G, params, rng)`` returning the canonical output.
    symmetric : the input must be symmetric.
    weighted : the input must carry edge weights.
    uses_source : the problem takes a source vertex ``src``.
    defaults : default algorithm parameters.
    """

    name: str
    title: str
    run: Runner
    symmetric: bool = True
    weighted: bool = False
    uses_source: bool = False
    defaults: dict = field(default_factory=dict)

    def params(self, overrides: dict | None = None) -> dict:
        """Defaults merged with ``overrides``, coerced to the defaults' types."""
        out = dict(self.defaults)
        if self.uses_source:
            out.setdefault("src", 0)
        for key, val in (overrides or {}).items():
            if key not in out:
                raise ValueError(f"problem {self.name!r} has no parameter {key!r}")
            out[key] = _coerce(out[key], val)
        return out

    def check_input(self, G: Graph, params: dict) -> None:
        if self.symmetric and not G.symmetric:
            raise ValueError(f"{self.name} needs a symmetric graph")
        if self.weighted and not G.weighted:
            raise ValueError(f"{self.name} needs edge weights")
        if self.uses_source and not 0 <= params["src"] < G.n:
            raise ValueError(f"source {params['src']} is out of range for n={G.n}")


def _coerce(default: Any, val: Any) -> Any:
    if isinstance(val, str):
        if isinstance(default, bool):
            return val.lower() in ("1", "true", "yes")
        if isinstance(default, int):
            return int(val)
        if isinstance(default, float):
            return float(val)
    return val


def _rows(a: np.ndarray, width: int = 2) -> np.ndarray:
    a = np.asarray(a, dtype=np.int64).reshape(-1, width)
    if a.shape[0] == 0:
        return a
    return a[np.lexsort(a.T[::-1])]


def _run_spanner(G, p, rng):
    return _rows(alg.spanner(G, p["k"], rng))


def _run_msf(G, p, rng):
    f = alg.msf(G, rng)
    return _rows(np.stack([f.u, f.v, f.w], axis=1), 3)


def _run_biconnectivity(G, p, rng):
    orc = alg.biconnectivity(G, p["beta"], rng)
    e = G.undirected_edges()
    return orc.label_edges(e.src, e.dst)


def _run_matching(G, p, rng):
    return _rows(alg.maximal_matching(G, rng).edges)


def _run_densest(G, p, rng):
    return np.sort(alg.densest_subgraph(G, p["epsilon"]).vertices)


def _run_pagerank(G, p, rng):
    return alg.pagerank(G, p["gamma"], p["eps"], p["max_iters"]).ranks


PROBLEMS: dict[str, Problem] = {
    p.name: p
    for p in [
        Problem("bfs", "breadth-first search", lambda G, p, r: alg.bfs(G, p["src"]), symmetric=False, uses_source=True),
        Problem("wbfs", "integral-weight SSSP", lambda G, p, r: alg.weighted_bfs(G, p["src"]),
                symmetric=False, weighted=True, uses_source=True),
        Problem("bellman-ford", "general-weight SSSP", lambda G, p, r: alg.bellman_ford(G, p["src"]),
                symmetric=False, weighted=True, uses_source=True),
        Problem("widest-path", "single-source widest path",
                lambda G, p, r: alg.widest_path(G, p["src"], method=p["method"]),
                symmetric=False, weighted=True, uses_source=True, defaults={"method": "bucketed"}),
        Problem("bc", "single-source betweenness centrality", lambda G, p, r: alg.betweenness(G, p["src"]),
                symmetric=False, uses_source=True),
        Problem("spanner", "O(k)-spanner", _run_spanner, defaults={"k": 4}),
        Problem("ldd", "low-diameter decomposition", lambda G, p, r: alg.ldd(G, p["beta"], r),
                defaults={"beta": 0.2}),
        Problem("connectivity", "connectivity", lambda G, p, r: alg.connectivity(G, p["beta"], r),
                defaults={"beta": 0.2}),
        Problem("spanning-forest", "spanning forest",
                lambda G, p, r: _rows(alg.spanning_forest(G, p["beta"], r)), defaults={"beta": 0.2}),
        Problem("biconnectivity", "biconnectivity", _run_biconnectivity, defaults={"beta": 0.2}),
        Problem("msf", "minimum spanning forest", _run_msf, weighted=True),
        Problem("scc", "strongly connected components", lambda G, p, r: alg.scc(G, p["beta"], r),
                symmetric=False, defaults={"beta": 1.5}),
        Problem("mis", "maximal independent set", lambda G, p, r: alg.mis(G, r)),
        Problem("mm", "maximal matching", _run_matching),
        Problem("coloring", "graph coloring", lambda G, p, r: alg.coloring(G, r, p["heuristic"]),
                defaults={"heuristic": "LLF"}),
        Problem("set-cover", "approximate set cover", lambda G, p, r: alg.set_cover(G, p["epsilon"], r),
                symmetric=False, defaults={"epsilon": 0.01}),
        Problem("kcore", "k-core", lambda G, p, r: alg.kcore(G).coreness),
        Problem("densest-subgraph", "approximate densest subgraph", _run_densest, defaults={"epsilon": 0.001}),
        Problem("tc", "triangle counting", lambda G, p, r: np.array([alg.triangle_count(G)], dtype=np.int64)),
        Problem("pagerank", "PageRank", _run_pagerank, symmetric=False,
                defaults={"gamma": 0.85, "eps": 1e-6, "max_iters": 100}),
    ]
}


def get_problem(name: str) -> Problem:
    try:
        return PROBLEMS[name]
    except KeyError:
        raise ValueError(f"unknown problem {name!r}; choose from {', '.join(PROBLEMS)}") from None


def solve(name: str, G: Graph, params: dict | None = None, seed: int = 0) -> np.ndarray:
    """Run problem ``name`` on ``G`` and return its canonical output."""
    prob = get_problem(name)
    p = prob.params(params)
    prob.check_input(G, p)
    return prob.run(G, p, RandomSource(seed))
