"""
Traffic Classification Network

Byte embeddings feed two untied graph encoders (header and payload); their
readouts are fused into a packet vector, an LSTM turns the packet sequence
into a flow vector, and one classification head per level produces logits.
"""

import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Sequence

import numpy as np
import torch
from torch import Tensor, nn
from torch.nn.utils.rnn import pack_sequence

from traffic_graph.constants import (
    DEFAULT_EMBED_DIM,
    DEFAULT_GNN_LAYERS,
    DEFAULT_HIDDEN_DIM,
    PRELU_INIT_SLOPE,
    STREAM_INIT,
)
from traffic_graph.exceptions import GraphError
from traffic_graph.graphs.graph import GraphOrigin, TrafficGraph
from traffic_graph.model.batch import FlowBatch, GraphBatch, collate_graphs
from traffic_graph.model.layers import GraphEncoder, PReLU

__all__ = [
    "ClassificationHead",
    "EmbeddingSource",
    "FlowEmbedding",
    "ModelDims",
    "PacketEmbedding",
    "TrafficModel",
    "torch_seed",
]


def torch_seed(*entropy: int) -> int:
    """Non-negative 63-bit torch seed derived from integer entropy"""
    return int(np.random.SeedSequence(list(entropy)).generate_state(1, dtype=np.uint64)[0]) & 0x7FFF_FFFF_FFFF_FFFF


class EmbeddingSource(str, Enum):
    ANCHOR = "anchor"
    AUGMENTED = "augmented"


@dataclass(frozen=True)
class PacketEmbedding:
    """
    Packet vectors p of a batch, (P, D), tagged with the view they came from
    """

    vectors: Tensor
    source: EmbeddingSource


@dataclass(frozen=True)
class FlowEmbedding:
    """
    Flow vectors f of a batch, (F, D_h), tagged with the view they came from
    """

    vectors: Tensor
    source: EmbeddingSource


@dataclass(frozen=True)
class ModelDims:
    num_classes: int
    embed_dim: int = DEFAULT_EMBED_DIM
    hidden_dim: int = DEFAULT_HIDDEN_DIM
    gnn_layers: int = DEFAULT_GNN_LAYERS


class ClassificationHead(nn.Module):
    """
    logits = W2 PReLU(W1 x + b1) + b2
    """

    def __init__(self, in_dim: int, hidden_dim: int, num_classes: int) -> None:
        super().__init__()
        self.fc1 = nn.Linear(in_dim, hidden_dim)
        self.act = PReLU()
        self.fc2 = nn.Linear(hidden_dim, num_classes)

    def forward(self, x: Tensor) -> Tensor:
        return self.fc2(self.act(self.fc1(x)))


class TrafficModel(nn.Module):
    """
    Packet and flow classifier sharing one packet encoder

    Args:
        dims: Class count and layer sizes
        gnn_dropout: Dropout after each message-passing layer (training only)
        lstm_dropout: Dropout on the flow vector (training only)
        seed: Initialization seed

    Example:
        model = TrafficModel(ModelDims(num_classes=4), seed=0)
        batch = collate_flows(flows, labels)
        packets, flows = model(batch)
        logits = model.flow_head(flows.vectors)
    """

    def __init__(self, dims: ModelDims, gnn_dropout: float = 0.0, lstm_dropout: float = 0.0, seed: int = 0) -> None:
        super().__init__()
        self.dims = dims
        e, h = dims.embed_dim, dims.hidden_dim
        self.byte_embed = nn.Embedding(256, e)
        self.header_encoder = GraphEncoder(e, h, dims.gnn_layers, gnn_dropout)
        self.payload_encoder = GraphEncoder(e, h, dims.gnn_layers, gnn_dropout)
        self.fusion = nn.Linear(2 * h, h)
        self.lstm = nn.LSTM(h, h, num_layers=1, batch_first=True)
        self.lstm_dropout = nn.Dropout(lstm_dropout)
        self.flow_head = ClassificationHead(h, h, dims.num_classes)
        self.packet_head = ClassificationHead(h, h, dims.num_classes)
        self.reset_parameters(seed)

    @torch.no_grad()
    def reset_parameters(self, seed: int = 0) -> None:
        """Uniform +-1/sqrt(fan_in) matrices, zero biases, PReLU slopes 0.25"""
        generator = torch.Generator().manual_seed(torch_seed(seed, STREAM_INIT))
        for name, param in self.named_parameters():
            if param.dim() >= 2:
                bound = 1.0 / math.sqrt(param.shape[1])
                param.uniform_(-bound, bound, generator=generator)
            elif name.endswith("act.weight"):
                param.fill_(PRELU_INIT_SLOPE)
            else:
                param.zero_()

    def encode_graphs(self, batch: GraphBatch, origin: GraphOrigin) -> Tensor:
        """(G, H) readouts of a batch of header or payload graphs"""
        encoder = self.header_encoder if origin is GraphOrigin.HEADER else self.payload_encoder
        features = self.byte_embed(batch.byte_values)
        return encoder(features, batch.edge_index, batch.graph_index, batch.num_graphs)

    def encode_graph(self, graph: TrafficGraph) -> Tensor:
        """(H,) readout of one graph, with the encoder matching its origin"""
        return self.encode_graphs(collate_graphs([graph]), graph.origin)[0]

    def encode_packets(
        self,
        header: GraphBatch,
        payload: GraphBatch,
        source: EmbeddingSource = EmbeddingSource.ANCHOR,
    ) -> PacketEmbedding:
        """p = W_fusion [header readout ; payload readout] + b"""
        if header.num_graphs != payload.num_graphs:
            raise GraphError(f"{header.num_graphs} header graph(s) but {payload.num_graphs} payload graph(s)")
        fused = torch.cat(
            [self.encode_graphs(header, GraphOrigin.HEADER), self.encode_graphs(payload, GraphOrigin.PAYLOAD)], dim=1
        )
        return PacketEmbedding(self.fusion(fused), source)

    def encode_packet(self, header: TrafficGraph, payload: TrafficGraph) -> PacketEmbedding:
        return self.encode_packets(collate_graphs([header]), collate_graphs([payload]))

    def encode_flows(self, packets: Tensor, lengths: Sequence[int], source: EmbeddingSource) -> FlowEmbedding:
        """
        Final LSTM hidden state of each packet sequence, zero initial state

        Args:
            packets: (P, D) packet vectors of all flows, flow after flow
            lengths: Packets per flow
            source: View tag

        Raises:
            GraphError: An empty sequence
        """
        if not lengths or min(lengths) < 1:
            raise GraphError("Cannot encode an empty packet sequence")
        if sum(lengths) != packets.shape[0]:
            raise GraphError(f"Lengths add up to {sum(lengths)} but {packets.shape[0]} packet vector(s) were given")
        sequences = list(torch.split(packets, list(lengths)))
        _, (h_n, _) = self.lstm(pack_sequence(sequences, enforce_sorted=False))
        return FlowEmbedding(self.lstm_dropout(h_n[-1]), source)

    def encode_flow(self, packets: Sequence[PacketEmbedding]) -> FlowEmbedding:
        """Flow vector of one packet sequence"""
        if not packets:
            raise GraphError("Cannot encode an empty packet sequence")
        vectors = torch.cat([p.vectors for p in packets])
        return self.encode_flows(vectors, [vectors.shape[0]], packets[0].source)

    def forward(
        self,
        batch: FlowBatch,
        source: EmbeddingSource = EmbeddingSource.ANCHOR,
        with_flows: bool = True,
        keep: Optional[Sequence[np.ndarray]] = None,
    ) -> "tuple[PacketEmbedding, Optional[FlowEmbedding]]":
        """
        Packet vectors of every packet and, optionally, flow vectors

        Args:
            batch: Collated flows
            source: View tag for the produced embeddings
            with_flows: Run the sequence encoder
            keep: Per-flow keep-masks; dropped packets are removed from the sequence

        Returns:
            (packet embedding, flow embedding or None)
        """
        packets = self.encode_packets(batch.header, batch.payload, source)
        if not with_flows:
            return packets, None
        vectors, lengths = packets.vectors, list(batch.lengths)
        if keep is not None:
            mask = torch.from_numpy(np.concatenate([np.asarray(k, dtype=bool) for k in keep]))
            vectors = vectors[mask]
            lengths = [int(np.count_nonzero(k)) for k in keep]
        return packets, self.encode_flows(vectors, lengths, source)

    def parameter_counts(self) -> Dict[str, int]:
        """Parameter count per top-level component"""
        counts: Dict[str, int] = {}
        for name, param in self.named_parameters():
            group = name.split(".", 1)[0]
            counts[group] = counts.get(group, 0) + param.numel()
        return counts

    def predict(self, batch: FlowBatch) -> "tuple[Tensor, Tensor]":
        """Anchor-view argmax predictions (packet level, flow level)"""
        packets, flows = self(batch)
        if flows is None:
            raise GraphError("Flow vectors were not computed")
        return self.packet_head(packets.vectors).argmax(dim=1), self.flow_head(flows.vectors).argmax(dim=1)

