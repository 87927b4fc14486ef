"""Strictly non-backtracking closed walks in random covers of a base graph."""

from .covering_models import ModelSpec, assemble_cover, enumerate_all, sample
from .graph_core import Graph, GraphError, Ordering, OrderedGraph, bouquet, build_graph, cycle, theta
from .spectral import hashimoto, mu1
from .walks_homotopy import count_snbc, reduce_walk

__all__ = [
    "Graph", "GraphError", "ModelSpec", "Ordering", "OrderedGraph",
    "assemble_cover", "bouquet", "build_graph", "count_snbc", "cycle", "enumerate_all",
    "hashimoto", "mu1", "reduce_walk", "sample", "theta",
]
__version__ = "0.1.0"
