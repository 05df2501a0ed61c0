"""
Dataset Module

Preprocessed dataset records, the dataset file codec, the preprocessing
pipeline and the synthetic capture generator.
"""

from traffic_graph.dataset.builder import (
    CaptureSummary,
    PreprocessOptions,
    PreprocessSummary,
    build_dataset,
    load_manifest,
    manifest_from_directory,
    process_capture,
)
from traffic_graph.dataset.codec import decode_dataset, encode_dataset, read_dataset, write_dataset
from traffic_graph.dataset.records import (
    Dataset,
    DatasetStatistics,
    FlowRecord,
    LabelStatistics,
    PacketRecord,
    Split,
)
from traffic_graph.dataset.synth import SynthOptions, class_signature, synthesize_dataset, write_synthetic_captures

__all__ = [
    "CaptureSummary",
    "Dataset",
    "DatasetStatistics",
    "FlowRecord",
    "LabelStatistics",
    "PacketRecord",
    "PreprocessOptions",
    "PreprocessSummary",
    "Split",
    "SynthOptions",
    "build_dataset",
    "class_signature",
    "decode_dataset",
    "encode_dataset",
    "load_manifest",
    "manifest_from_directory",
    "process_capture",
    "read_dataset",
    "synthesize_dataset",
    "write_dataset",
    "write_synthetic_captures",
]
