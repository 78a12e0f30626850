"""Maximal cliques in collinearity graphs of Desarguesian nets."""

from .cliques import enumerate_maximal_cliques, maximal_cliques, size_histogram
from .gf import field_of_order, make_field
from .netgraph import Graph, NetSpec, build_net_graph, build_paley, build_peisert, build_taylor

__version__ = "0.1.0"

__all__ = [
    "Graph",
    "NetSpec",
    "build_net_graph",
    "build_paley",
    "build_peisert",
    "build_taylor",
    "enumerate_maximal_cliques",
    "field_of_order",
    "make_field",
    "maximal_cliques",
    "size_histogram",
]
