"""
Train Module

Learning-rate schedule, resumable training state and the training loop.
"""

from traffic_graph.train.loop import LOG_COLUMNS, accumulate_gradients, compute_terms, epoch_order, train
from traffic_graph.train.schedule import lr_at, steps_per_epoch
from traffic_graph.train.state import TrainState, make_optimizer

__all__ = [
    "LOG_COLUMNS",
    "TrainState",
    "accumulate_gradients",
    "compute_terms",
    "epoch_order",
    "lr_at",
    "make_optimizer",
    "steps_per_epoch",
    "train",
]
