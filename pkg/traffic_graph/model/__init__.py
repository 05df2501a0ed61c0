"""
Model Module

Graph encoders, the packet/flow network, gradients and the checkpoint codec.
"""

from traffic_graph.model.batch import FlowBatch, GraphBatch, collate_flows, collate_graphs
from traffic_graph.model.checkpoint import Checkpoint, read_checkpoint, write_checkpoint
from traffic_graph.model.gradients import backward
from traffic_graph.model.layers import GraphEncoder, MessagePassingLayer, PReLU, segment_mean
from traffic_graph.model.network import (
    ClassificationHead,
    EmbeddingSource,
    FlowEmbedding,
    ModelDims,
    PacketEmbedding,
    TrafficModel,
    torch_seed,
)

__all__ = [
    "Checkpoint",
    "ClassificationHead",
    "EmbeddingSource",
    "FlowBatch",
    "FlowEmbedding",
    "GraphBatch",
    "GraphEncoder",
    "MessagePassingLayer",
    "ModelDims",
    "PReLU",
    "PacketEmbedding",
    "TrafficModel",
    "backward",
    "collate_flows",
    "collate_graphs",
    "read_checkpoint",
    "segment_mean",
    "torch_seed",
    "write_checkpoint",
]
