"""
Exception Module

Provides unified exception handling mechanisms.
"""

from traffic_graph.exceptions.errors import (
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

__all__ = [
    "CaptureError",
    "CheckpointError",
    "ChecksumError",
    "ConfigurationError",
    "DataError",
    "DatasetError",
    "DatasetFormatError",
    "DimensionMismatchError",
    "GradientError",
    "GraphError",
    "LossError",
    "SplitError",
    "TrafficGraphError",
    "TrainingDivergedError",
    "TrainingError",
    "UnknownMagicError",
    "VersionMismatchError",
]
