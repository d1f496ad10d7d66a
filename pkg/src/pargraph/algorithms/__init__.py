"""The twenty benchmark algorithms."""

from .connectivity import (
    EdgeLabelOracle,
    ForestEdges,
    TreeMetrics,
    biconnectivity,
    connectivity,
    ldd,
    msf,
    scc,
    spanning_forest,
    tree_metrics,
)
from .covering import Matching, coloring, default_universe, maximal_matching, mis, set_cover
from .paths import UNREACHED, bellman_ford, betweenness, bfs, spanner, weighted_bfs, widest_path
from .structure import (
    Coreness,
    DensityResult,
    PageRankResult,
    densest_subgraph,
    induced_density,
    kcore,
    pagerank,
    triangle_count,
)

__all__ = [
    "Coreness",
    "DensityResult",
    "EdgeLabelOracle",
    "ForestEdges",
    "Matching",
    "PageRankResult",
    "TreeMetrics",
    "UNREACHED",
    "bellman_ford",
    "betweenness",
    "bfs",
    "biconnectivity",
    "coloring",
    "connectivity",
    "default_universe",
    "densest_subgraph",
    "induced_density",
    "kcore",
    "ldd",
    "maximal_matching",
    "mis",
    "msf",
    "pagerank",
    "scc",
    "set_cover",
    "spanner",
    "spanning_forest",
    "tree_metrics",
    "triangle_count",
    "weighted_bfs",
    "widest_path",
]
