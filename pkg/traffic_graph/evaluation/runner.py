"""
Evaluation Runner

Scores both heads of one checkpoint on a dataset split and exports anchor
embeddings. Evaluation never augments and runs the model in eval mode, so
dropout is off.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Union

import numpy as np
import torch
from loguru import logger

from traffic_graph.dataset.records import Dataset, FlowRecord, Split
from traffic_graph.evaluation.metrics import Level, MetricsReport, compute_metrics
from traffic_graph.exceptions import DatasetError
from traffic_graph.model.batch import collate_flows
from traffic_graph.model.checkpoint import Checkpoint, read_checkpoint
from traffic_graph.model.network import TrafficModel

__all__ = ["Predictions", "evaluate", "export_embeddings", "predict"]

_EVAL_BATCH = 64


@dataclass(frozen=True)
class Predictions:
    """
    Anchor-view outputs for a list of flows, in flow order

    Attributes:
        flow_labels / flow_predictions / flow_vectors: One entry per flow
        packet_labels / packet_predictions / packet_vectors: One entry per packet
    """

    flow_labels: np.ndarray
    flow_predictions: np.ndarray
    flow_vectors: np.ndarray
    packet_labels: np.ndarray
    packet_predictions: np.ndarray
    packet_vectors: np.ndarray


@torch.no_grad()
def predict(model: TrafficModel, flows: Sequence[FlowRecord], batch_size: int = _EVAL_BATCH) -> Predictions:
    """
    Run both heads over the anchor views of ``flows``

    Raises:
        DatasetError: No flows
    """
    if not flows:
        raise DatasetError("Nothing to evaluate: the selected split is empty")
    model.eval()
    parts: Dict[str, List[np.ndarray]] = {k: [] for k in ("fl", "fp", "fv", "pl", "pp", "pv")}
    for start in range(0, len(flows), batch_size):
        chunk = flows[start : start + batch_size]
        batch = collate_flows([[(p.header_graph, p.payload_graph) for p in f.packets] for f in chunk], [f.label for f in chunk])
        packets, flow_vectors = model(batch, with_flows=True)
        if flow_vectors is None:
            raise DatasetError("Flow vectors were not computed")
        parts["fl"].append(batch.labels.numpy())
        parts["fp"].append(model.flow_head(flow_vectors.vectors).argmax(dim=1).numpy())
        parts["fv"].append(flow_vectors.vectors.double().numpy())
        parts["pl"].append(batch.packet_labels.numpy())
        parts["pp"].append(model.packet_head(packets.vectors).argmax(dim=1).numpy())
        parts["pv"].append(packets.vectors.double().numpy())
    joined = {k: np.concatenate(v) for k, v in parts.items()}
    return Predictions(
        flow_labels=joined["fl"],
        flow_predictions=joined["fp"],
        flow_vectors=joined["fv"],
        packet_labels=joined["pl"],
        packet_predictions=joined["pp"],
        packet_vectors=joined["pv"],
    )


def _load(checkpoint: Union[Checkpoint, str, Path], dataset: Dataset) -> Checkpoint:
    loaded = checkpoint if isinstance(checkpoint, Checkpoint) else read_checkpoint(checkpoint)
    loaded.check_classes(dataset.num_classes)
    return loaded


def _levels(level: Optional[Level]) -> List[Level]:
    return [Level.FLOW, Level.PACKET] if level is None else [level]


def evaluate(
    checkpoint: Union[Checkpoint, str, Path],
    dataset: Dataset,
    split: Optional[Split] = Split.TEST,
    level: Optional[Level] = None,
) -> List[MetricsReport]:
    """
    Score one checkpoint

    Args:
        checkpoint: Loaded checkpoint or its path
        dataset: Preprocessed dataset
        split: Split to score; None scores every flow
        level: flow, packet, or None for both (flow first)

    Returns:
        One report per requested level

    Raises:
        DimensionMismatchError: Class counts differ
    """
    loaded = _load(checkpoint, dataset)
    flows = dataset.split(split)
    out = predict(loaded.model, flows)
    reports = []
    for lvl in _levels(level):
        if lvl is Level.FLOW:
            report = compute_metrics(out.flow_labels, out.flow_predictions, dataset.label_names, Level.FLOW)
        else:
            report = compute_metrics(out.packet_labels, out.packet_predictions, dataset.label_names, Level.PACKET)
        logger.info("{} level: accuracy {:.4f}, macro-F1 {:.4f}", lvl.value, report.accuracy, report.macro_f1)
        reports.append(report)
    return reports


def export_embeddings(
    checkpoint: Union[Checkpoint, str, Path],
    dataset: Dataset,
    out: Union[str, Path],
    level: Level = Level.FLOW,
    split: Optional[Split] = Split.TEST,
) -> int:
    """
    Write anchor embeddings as tab-separated text

    Each row holds the label index followed by the vector, in dataset order.

    Returns:
        Number of rows written

    Raises:
        DimensionMismatchError: Class counts differ
    """
    loaded = _load(checkpoint, dataset)
    result = predict(loaded.model, dataset.split(split))
    if level is Level.FLOW:
        labels, vectors = result.flow_labels, result.flow_vectors
    else:
        labels, vectors = result.packet_labels, result.packet_vectors
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    table = np.column_stack([labels.astype(np.float64), vectors])
    np.savetxt(path, table, delimiter="\t", fmt=["%d"] + ["%.9g"] * vectors.shape[1])
    logger.info("exported {} {} embedding(s) to {}", len(labels), level.value, path)
    return int(len(labels))
