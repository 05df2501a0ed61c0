"""
Traffic Graph Classifier

Packet- and flow-level encrypted traffic classification over byte-level
traffic graphs, trained with joint cross-entropy and contrastive objectives.
"""

__version__ = "2026.1.0"

# Config
from traffic_graph.config import (
    AugmentConfig,
    ConfigLoader,
    DatasetManifest,
    DatasetProfile,
    LossWeights,
    TrainConfig,
    build_train_config,
    get_profile,
)

# Dataset
from traffic_graph.dataset import (
    Dataset,
    FlowRecord,
    PacketRecord,
    PreprocessOptions,
    Split,
    SynthOptions,
    build_dataset,
    read_dataset,
    synthesize_dataset,
    write_dataset,
)

# Evaluation
from traffic_graph.evaluation import Level, MetricsReport, compute_metrics, evaluate, export_embeddings

# Exceptions
from traffic_graph.exceptions import (
    CaptureError,
    CheckpointError,
    ChecksumError,
    ConfigurationError,
    DataError,
    DatasetError,
    DatasetFormatError,
    DimensionMismatchError,
    GradientError,
    GraphError,
    LossError,
    SplitError,
    TrafficGraphError,
    TrainingDivergedError,
    TrainingError,
    UnknownMagicError,
    VersionMismatchError,
)

# Graphs
from traffic_graph.graphs import GraphOrigin, TrafficGraph, build_graph, build_packet_graphs

# Logging
from traffic_graph.logging import configure_logging, logger

# Model
from traffic_graph.model import Checkpoint, ModelDims, TrafficModel, read_checkpoint, write_checkpoint

# Training
from traffic_graph.train import TrainState, train

__all__ = [
    "__version__",
    # Config
    "AugmentConfig",
    "ConfigLoader",
    "DatasetManifest",
    "DatasetProfile",
    "LossWeights",
    "TrainConfig",
    "build_train_config",
    "get_profile",
    # Dataset
    "Dataset",
    "FlowRecord",
    "PacketRecord",
    "PreprocessOptions",
    "Split",
    "SynthOptions",
    "build_dataset",
    "read_dataset",
    "synthesize_dataset",
    "write_dataset",
    # Graphs
    "GraphOrigin",
    "TrafficGraph",
    "build_graph",
    "build_packet_graphs",
    # Model
    "Checkpoint",
    "ModelDims",
    "TrafficModel",
    "read_checkpoint",
    "write_checkpoint",
    # Training
    "TrainState",
    "train",
    # Evaluation
    "Level",
    "MetricsReport",
    "compute_metrics",
    "evaluate",
    "export_embeddings",
    # Logging
    "logger",
    "configure_logging",
    # Exceptions
    "TrafficGraphError",
    "ConfigurationError",
    "DataError",
    "CaptureError",
    "DatasetError",
    "DatasetFormatError",
    "UnknownMagicError",
    "VersionMismatchError",
    "ChecksumError",
    "SplitError",
    "GraphError",
    "CheckpointError",
    "DimensionMismatchError",
    "TrainingError",
    "TrainingDivergedError",
    "GradientError",
    "LossError",
]
