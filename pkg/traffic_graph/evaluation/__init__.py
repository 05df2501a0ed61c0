"""
Evaluation Module

Metrics at both levels and embedding export.
"""

from traffic_graph.evaluation.metrics import (
    ClassMetrics,
    Level,
    MeanMetrics,
    MetricsReport,
    compute_metrics,
    from_confusion,
    mean_metrics,
)
from traffic_graph.evaluation.runner import Predictions, evaluate, export_embeddings, predict

__all__ = [
    "ClassMetrics",
    "Level",
    "MeanMetrics",
    "MetricsReport",
    "Predictions",
    "compute_metrics",
    "evaluate",
    "export_embeddings",
    "from_confusion",
    "mean_metrics",
    "predict",
]
