"""Work-efficient bulk-synchronous graph algorithms on numpy."""

from .bucketing import Buckets, make_buckets, next_bucket, update_buckets
from .frontier import VertexSubset, edge_map, edge_map_blocked, vertex_map
from .graph import EdgeList, Graph, GraphError, build_csr, contract, directed_graph, symmetric_graph, transpose
from .histogram import histogram
from .parallel import num_workers, set_num_workers, workers
from .primitives import INF, NEG_INF, RandomSource
from .problems import PROBLEMS, solve

__version__ = "0.1.0"

__all__ = [
    "Buckets",
    "EdgeList",
    "Graph",
    "GraphError",
    "INF",
    "NEG_INF",
    "PROBLEMS",
    "RandomSource",
    "VertexSubset",
    "build_csr",
    "contract",
    "directed_graph",
    "edge_map",
    "edge_map_blocked",
    "histogram",
    "make_buckets",
    "next_bucket",
    "num_workers",
    "set_num_workers",
    "solve",
    "symmetric_graph",
    "transpose",
    "update_buckets",
    "vertex_map",
    "workers",
]
