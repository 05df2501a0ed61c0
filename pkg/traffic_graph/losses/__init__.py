"""
Losses Module

Contrastive, classification and combined training losses.
"""

from traffic_graph.losses.classification import cross_entropy, head_loss
from traffic_graph.losses.contrastive import ContrastiveBatch, supcon_loss, unsup_con_loss
from traffic_graph.losses.objective import LossTerms, LossWeights, total_loss

__all__ = [
    "ContrastiveBatch",
    "LossTerms",
    "LossWeights",
    "cross_entropy",
    "head_loss",
    "supcon_loss",
    "total_loss",
    "unsup_con_loss",
]
