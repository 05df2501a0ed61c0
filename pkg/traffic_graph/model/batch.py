"""
Model input batching

Graphs are packed into one disjoint union with offset node indices; flows
keep their packet counts so the sequence encoder can split them again.
"""

from dataclasses import dataclass
from typing import List, Sequence, Tuple

import numpy as np
import torch
from torch import Tensor

from traffic_graph.exceptions import GraphError
from traffic_graph.graphs.graph import TrafficGraph

__all__ = ["FlowBatch", "GraphBatch", "collate_flows", "collate_graphs"]

PacketGraphs = Tuple[TrafficGraph, TrafficGraph]


@dataclass(frozen=True)
class GraphBatch:
    """
    Disjoint union of graphs

    Attributes:
        byte_values: (N,) byte value of every node
        edge_index: (2, M) directed edges, each undirected edge present twice
        graph_index: (N,) graph number of every node
        num_graphs: Graph count
    """

    byte_values: Tensor
    edge_index: Tensor
    graph_index: Tensor
    num_graphs: int


@dataclass(frozen=True)
class FlowBatch:
    """
    Packets of several flows, in flow order

    Attributes:
        header: Header graphs of every packet
        payload: Payload graphs of every packet
        lengths: Packet count of each flow
        labels: (F,) flow labels
        packet_labels: (P,) labels inherited by every packet
    """

    header: GraphBatch
    payload: GraphBatch
    lengths: List[int]
    labels: Tensor
    packet_labels: Tensor

    @property
    def num_flows(self) -> int:
        return len(self.lengths)

    @property
    def num_packets(self) -> int:
        return int(sum(self.lengths))


def collate_graphs(graphs: Sequence[TrafficGraph]) -> GraphBatch:
    """
    Pack graphs into one batch

    Raises:
        GraphError: No graphs, or an empty graph
    """
    if not graphs:
        raise GraphError("Cannot batch zero graphs")
    values, edges, owners = [], [], []
    offset = 0
    for number, graph in enumerate(graphs):
        if graph.num_nodes == 0:
            raise GraphError("Cannot encode an empty graph")
        values.append(graph.nodes.astype(np.int64))
        if graph.num_edges:
            pairs = graph.edges + offset
            edges.append(np.concatenate([pairs, pairs[:, ::-1]]))
        owners.append(np.full(graph.num_nodes, number, dtype=np.int64))
        offset += graph.num_nodes

    edge_array = np.concatenate(edges).T if edges else np.zeros((2, 0), dtype=np.int64)
    return GraphBatch(
        byte_values=torch.from_numpy(np.concatenate(values)),
        edge_index=torch.from_numpy(np.ascontiguousarray(edge_array)),
        graph_index=torch.from_numpy(np.concatenate(owners)),
        num_graphs=len(graphs),
    )


def collate_flows(flows: Sequence[Sequence[PacketGraphs]], labels: Sequence[int]) -> FlowBatch:
    """
    Pack flows given as (header, payload) graph pairs per packet

    Raises:
        GraphError: A flow without packets
    """
    if any(len(flow) == 0 for flow in flows):
        raise GraphError("Cannot encode a flow without packets")
    lengths = [len(flow) for flow in flows]
    packets = [pair for flow in flows for pair in flow]
    return FlowBatch(
        header=collate_graphs([h for h, _ in packets]),
        payload=collate_graphs([p for _, p in packets]),
        lengths=lengths,
        labels=torch.tensor(list(labels), dtype=torch.long),
        packet_labels=torch.tensor([label for label, n in zip(labels, lengths) for _ in range(n)], dtype=torch.long),
    )
