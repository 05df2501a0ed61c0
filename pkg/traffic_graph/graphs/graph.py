"""
Byte-level traffic graphs

Nodes are distinct byte values in first-appearance order; an undirected edge
joins two values whose point-wise mutual information is strictly positive.
"""

from dataclasses import dataclass
from enum import Enum
from typing import Set, Tuple

import numpy as np

from traffic_graph.constants import DEFAULT_PMI_WINDOW, MAX_GRAPH_NODES
from traffic_graph.exceptions import GraphError
from traffic_graph.graphs.pmi import ByteLike, as_byte_array, count_cooccurrence
from traffic_graph.ingest.models import CleanPacket

__all__ = ["GraphOrigin", "TrafficGraph", "build_graph", "build_packet_graphs"]


class GraphOrigin(str, Enum):
    """
    Packet segment a graph was built from
    """

    HEADER = "header"
    PAYLOAD = "payload"


@dataclass(frozen=True, eq=False)
class TrafficGraph:
    """
    Undirected graph over distinct byte values

    Attributes:
        nodes: Byte values, uint8, unique
        edges: (E, 2) node-index pairs with i < j
        origin: Header or payload
    """

    nodes: np.ndarray
    edges: np.ndarray
    origin: GraphOrigin

    def __post_init__(self) -> None:
        nodes = np.asarray(self.nodes, dtype=np.uint8).reshape(-1)
        edges = np.asarray(self.edges, dtype=np.int64).reshape(-1, 2)
        if nodes.size > MAX_GRAPH_NODES:
            raise GraphError(f"Graph has {nodes.size} nodes, at most {MAX_GRAPH_NODES} allowed")
        if np.unique(nodes).size != nodes.size:
            raise GraphError("Graph node values must be unique")
        if edges.size:
            if edges.min() < 0 or edges.max() >= nodes.size:
                raise GraphError("Edge endpoint out of range")
            if np.any(edges[:, 0] >= edges[:, 1]):
                raise GraphError("Edges must be stored as (i, j) with i < j, self-loops are not allowed")
        nodes.setflags(write=False)
        edges.setflags(write=False)
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "origin", GraphOrigin(self.origin))

    @property
    def num_nodes(self) -> int:
        return int(self.nodes.size)

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def value_edges(self) -> Set[Tuple[int, int]]:
        """Edges as (low byte value, high byte value) pairs, independent of node order"""
        return {
            (min(int(self.nodes[i]), int(self.nodes[j])), max(int(self.nodes[i]), int(self.nodes[j])))
            for i, j in self.edges
        }

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TrafficGraph):
            return NotImplemented
        return (
            self.origin == other.origin
            and np.array_equal(self.nodes, other.nodes)
            and np.array_equal(self.edges, other.edges)
        )

    def __repr__(self) -> str:
        return f"TrafficGraph(origin={self.origin.value}, nodes={self.num_nodes}, edges={self.num_edges})"


def build_graph(
    data: ByteLike,
    window: int = DEFAULT_PMI_WINDOW,
    origin: GraphOrigin = GraphOrigin.PAYLOAD,
) -> TrafficGraph:
    """
    Build the traffic graph of a byte sequence

    Args:
        data: Byte sequence
        window: PMI window length
        origin: Segment tag

    Returns:
        TrafficGraph with an edge for every value pair of positive PMI

    Raises:
        GraphError: Empty sequence
    """
    values = as_byte_array(data)
    stats = count_cooccurrence(values, window)

    distinct, first_seen = np.unique(values, return_index=True)
    nodes = distinct[np.argsort(first_seen)].astype(np.int64)

    # PMI > 0  <=>  pair * total > uni_a * uni_b, decided in exact integers
    pairs = stats.pair_counts[np.ix_(nodes, nodes)]
    uni = stats.unigram_counts[nodes]
    positive = pairs * stats.total_windows > np.outer(uni, uni)
    positive &= pairs > 0
    edges = np.argwhere(np.triu(positive, k=1))

    return TrafficGraph(nodes=nodes.astype(np.uint8), edges=edges, origin=origin)


def build_packet_graphs(packet: CleanPacket, window: int = DEFAULT_PMI_WINDOW) -> Tuple[TrafficGraph, TrafficGraph]:
    """
    Build the header graph and the payload graph of one packet

    Raises:
        GraphError: Empty header or payload
    """
    if not packet.header_bytes:
        raise GraphError("Packet has no header bytes")
    if not packet.payload_bytes:
        raise GraphError("Packet has no payload bytes")
    return (
        build_graph(packet.header_bytes, window, GraphOrigin.HEADER),
        build_graph(packet.payload_bytes, window, GraphOrigin.PAYLOAD),
    )
