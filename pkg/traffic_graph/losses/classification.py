"""
Classification Losses
"""

from typing import Union

import torch.nn.functional as F
from torch import Tensor, nn

from traffic_graph.exceptions import LossError
from traffic_graph.model.network import EmbeddingSource, FlowEmbedding, PacketEmbedding

__all__ = ["cross_entropy", "head_loss"]


def cross_entropy(logits: Tensor, labels: Tensor, smoothing: float = 0.0) -> Tensor:
    """
    Mean of -sum_c q_c log softmax(logits)_c, q = (1 - e) onehot + e / C

    Args:
        logits: (B, C) or (C,) logits
        labels: (B,) or scalar label indices
        smoothing: Label smoothing e in [0, 1)

    Raises:
        LossError: smoothing out of range
    """
    if not 0.0 <= smoothing < 1.0:
        raise LossError(f"Label smoothing must be in [0, 1), got {smoothing}")
    if logits.dim() == 1:
        logits, labels = logits.unsqueeze(0), labels.reshape(1)
    return F.cross_entropy(logits, labels, label_smoothing=smoothing)


def head_loss(
    head: nn.Module,
    embedding: Union[PacketEmbedding, FlowEmbedding],
    labels: Tensor,
    smoothing: float = 0.0,
) -> Tensor:
    """
    Cross-entropy of a classification head on anchor embeddings

    Raises:
        LossError: The embedding comes from an augmented view
    """
    if embedding.source is not EmbeddingSource.ANCHOR:
        raise LossError("Classification losses only take anchor-view embeddings")
    return cross_entropy(head(embedding.vectors), labels, smoothing)
