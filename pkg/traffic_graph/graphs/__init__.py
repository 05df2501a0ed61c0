"""
Graphs Module

Byte-level traffic graph construction.
"""

from traffic_graph.graphs.graph import GraphOrigin, TrafficGraph, build_graph, build_packet_graphs
from traffic_graph.graphs.pmi import CooccurrenceStats, count_cooccurrence, pmi

__all__ = [
    "CooccurrenceStats",
    "GraphOrigin",
    "TrafficGraph",
    "build_graph",
    "build_packet_graphs",
    "count_cooccurrence",
    "pmi",
]
