"""
Classification Metrics

Accuracy plus macro-averaged precision, recall and F1. A class with no
predicted (or no true) samples scores 0 for the undefined ratio and still
counts in the macro mean.
"""

from enum import Enum
from typing import List, Sequence

import numpy as np
from pydantic import BaseModel, Field
from sklearn.metrics import confusion_matrix, precision_recall_fscore_support

__all__ = ["ClassMetrics", "Level", "MeanMetrics", "MetricsReport", "compute_metrics", "from_confusion", "mean_metrics"]


class Level(str, Enum):
    """Task level"""

    FLOW = "flow"
    PACKET = "packet"


class ClassMetrics(BaseModel):
    label: str
    precision: float
    recall: float
    f1: float
    support: int


class MetricsReport(BaseModel):
    """
    Metrics of one level on one split

    Attributes:
        level: flow or packet
        accuracy: trace / total
        macro_precision: Unweighted mean of per-class precision
        macro_recall: Unweighted mean of per-class recall
        macro_f1: Unweighted mean of per-class F1
        per_class: Per-class scores and supports
        confusion: C x C counts, rows are true labels
    """

    level: Level
    accuracy: float = Field(ge=0.0, le=1.0)
    macro_precision: float
    macro_recall: float
    macro_f1: float
    per_class: List[ClassMetrics]
    confusion: List[List[int]]

    @property
    def label_names(self) -> List[str]:
        return [c.label for c in self.per_class]

    def to_table(self) -> str:
        """Human-readable table"""
        width = max([len("label")] + [len(c.label) for c in self.per_class])
        lines = [
            f"[{self.level.value}] accuracy {self.accuracy:.4f}  precision {self.macro_precision:.4f}  "
            f"recall {self.macro_recall:.4f}  macro-F1 {self.macro_f1:.4f}",
            f"  {'label':<{width}}  precision  recall     f1         support",
        ]
        for c in self.per_class:
            lines.append(f"  {c.label:<{width}}  {c.precision:<9.4f}  {c.recall:<9.4f}  {c.f1:<9.4f}  {c.support}")
        return "\n".join(lines)


def compute_metrics(
    y_true: Sequence[int],
    y_pred: Sequence[int],
    label_names: Sequence[str],
    level: Level = Level.FLOW,
) -> MetricsReport:
    """
    Metrics from true and predicted label indices

    >>> report = compute_metrics([0, 0, 1, 1], [0, 1, 1, 1], ["a", "b"])
    >>> report.accuracy
    0.75
    """
    labels = list(range(len(label_names)))
    truth = np.asarray(y_true, dtype=np.int64)
    predicted = np.asarray(y_pred, dtype=np.int64)
    matrix = confusion_matrix(truth, predicted, labels=labels)
    precision, recall, f1, support = precision_recall_fscore_support(
        truth, predicted, labels=labels, average=None, zero_division=0
    )
    total = int(matrix.sum())
    return MetricsReport(
        level=level,
        accuracy=float(np.trace(matrix) / total) if total else 0.0,
        macro_precision=float(np.mean(precision)),
        macro_recall=float(np.mean(recall)),
        macro_f1=float(np.mean(f1)),
        per_class=[
            ClassMetrics(label=name, precision=float(p), recall=float(r), f1=float(f), support=int(s))
            for name, p, r, f, s in zip(label_names, precision, recall, f1, support)
        ],
        confusion=matrix.astype(int).tolist(),
    )


def from_confusion(
    confusion: Sequence[Sequence[int]],
    label_names: Sequence[str],
    level: Level = Level.FLOW,
) -> MetricsReport:
    """
    Recompute a report from a stored confusion matrix

    The matrix is expanded back into (true, predicted) pairs and scored by
    :func:`compute_metrics`, so the scalars match the original report exactly.
    """
    matrix = np.asarray(confusion, dtype=np.int64)
    rows, cols = np.indices(matrix.shape)
    counts = matrix.ravel()
    return compute_metrics(np.repeat(rows.ravel(), counts), np.repeat(cols.ravel(), counts), label_names, level)


class MeanMetrics(BaseModel):
    """
    Scalar metrics averaged over several runs of the same level
    """

    level: Level
    runs: int
    accuracy: float
    macro_precision: float
    macro_recall: float
    macro_f1: float


def mean_metrics(reports: Sequence[MetricsReport]) -> MeanMetrics:
    """
    Average of several reports

    Raises:
        ValueError: No reports, or reports of different levels
    """
    if not reports:
        raise ValueError("no reports to average")
    levels = {r.level for r in reports}
    if len(levels) != 1:
        raise ValueError("cannot average reports of different levels")
    return MeanMetrics(
        level=reports[0].level,
        runs=len(reports),
        accuracy=float(np.mean([r.accuracy for r in reports])),
        macro_precision=float(np.mean([r.macro_precision for r in reports])),
        macro_recall=float(np.mean([r.macro_recall for r in reports])),
        macro_f1=float(np.mean([r.macro_f1 for r in reports])),
    )
