"""
Training State

Everything needed to continue a run: parameters, Adam moments, counters and
the configuration. Random streams are derived from (seed, step, sample), so
the step counter is the whole random state.
"""

from dataclasses import dataclass
from pathlib import Path
from typing import List, Optional, Union

import torch

from traffic_graph.config.training import TrainConfig
from traffic_graph.constants import ADAM_BETAS, ADAM_EPS
from traffic_graph.model.checkpoint import read_checkpoint, write_checkpoint
from traffic_graph.model.network import ModelDims, TrafficModel

__all__ = ["TrainState", "make_optimizer"]


def make_optimizer(model: TrafficModel, cfg: TrainConfig) -> torch.optim.Adam:
    # single-tensor kernels keep float results identical across resumes
    return torch.optim.Adam(model.parameters(), lr=cfg.lr_max, betas=ADAM_BETAS, eps=ADAM_EPS, foreach=False)


@dataclass
class TrainState:
    """
    Resumable training state

    Attributes:
        model: Network being trained
        optimizer: Adam over the model parameters
        config: Training configuration
        label_names: Category names
        step: Optimizer steps taken
        epoch: Completed epochs
        best_loss: Lowest epoch-mean loss so far
        running_loss: Sum of step losses in the current epoch
        running_steps: Steps counted in running_loss
    """

    model: TrafficModel
    optimizer: torch.optim.Adam
    config: TrainConfig
    label_names: List[str]
    step: int = 0
    epoch: int = 0
    best_loss: Optional[float] = None
    running_loss: float = 0.0
    running_steps: int = 0

    @classmethod
    def fresh(cls, config: TrainConfig, label_names: List[str]) -> "TrainState":
        """Newly initialized model and optimizer"""
        dims = ModelDims(
            num_classes=len(label_names),
            embed_dim=config.embed_dim,
            hidden_dim=config.hidden_dim,
            gnn_layers=config.gnn_layers,
        )
        model = TrafficModel(dims, gnn_dropout=config.gnn_dropout, lstm_dropout=config.lstm_dropout, seed=config.seed)
        return cls(model=model, optimizer=make_optimizer(model, config), config=config, label_names=list(label_names))

    def save(self, path: Union[str, Path]) -> None:
        write_checkpoint(
            path,
            self.model,
            self.config,
            self.label_names,
            step=self.step,
            epoch=self.epoch,
            best_loss=self.best_loss,
            running=(self.running_loss, self.running_steps),
            optimizer=self.optimizer,
        )

    @classmethod
    def resume(cls, path: Union[str, Path]) -> "TrainState":
        """
        Rebuild the state saved at ``path``

        Raises:
            ChecksumError: Truncated or corrupted file
            VersionMismatchError: Written by another format version
        """
        checkpoint = read_checkpoint(path)
        optimizer = make_optimizer(checkpoint.model, checkpoint.config)
        if checkpoint.optimizer_state is not None and checkpoint.optimizer_state["state"]:
            restored = optimizer.state_dict()
            restored["state"] = checkpoint.optimizer_state["state"]
            optimizer.load_state_dict(restored)
        return cls(
            model=checkpoint.model,
            optimizer=optimizer,
            config=checkpoint.config,
            label_names=checkpoint.label_names,
            step=checkpoint.step,
            epoch=checkpoint.epoch,
            best_loss=checkpoint.best_loss,
            running_loss=checkpoint.running_loss,
            running_steps=checkpoint.running_steps,
        )
