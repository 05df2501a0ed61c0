"""
Checkpoint File Codec

Layout, integers little-endian::

    magic "CTFM" | version u16 | header length u32 | JSON header (utf-8)
    every parameter as raw float32, in state_dict order
    if the header says so: Adam exp_avg then exp_avg_sq per parameter, float32
    CRC32 u32 of everything above

The JSON header carries the dimensions, label names, parameter names and
shapes, the training configuration and the training counters.
"""

import io
import json
import struct
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import torch
from loguru import logger

from traffic_graph.config.training import TrainConfig
from traffic_graph.constants import CHECKPOINT_MAGIC, CHECKPOINT_VERSION
from traffic_graph.dataset.binary import ByteReader, append_crc, strip_crc, write_atomic
from traffic_graph.exceptions import CheckpointError, DimensionMismatchError, VersionMismatchError
from traffic_graph.model.network import ModelDims, TrafficModel

__all__ = ["Checkpoint", "read_checkpoint", "write_checkpoint"]

_FLOAT = np.dtype("<f4")


@dataclass
class Checkpoint:
    """
    Decoded checkpoint

    Attributes:
        model: Model with restored float32 parameters
        config: Training configuration the model was trained with
        label_names: Category names, position is the label index
        step: Optimizer steps taken
        epoch: Completed epochs
        best_loss: Lowest epoch-mean training loss seen, if any
        running_loss: Sum of step losses in the unfinished epoch
        running_steps: Steps counted in running_loss
        optimizer_state: Adam state dict ready for ``load_state_dict``, if saved
    """

    model: TrafficModel
    config: TrainConfig
    label_names: List[str]
    step: int = 0
    epoch: int = 0
    best_loss: Optional[float] = None
    running_loss: float = 0.0
    running_steps: int = 0
    optimizer_state: Optional[Dict[str, Any]] = None

    @property
    def num_classes(self) -> int:
        return len(self.label_names)

    def check_classes(self, num_classes: int) -> None:
        """
        Raises:
            DimensionMismatchError: The dataset has a different class count
        """
        if num_classes != self.num_classes:
            raise DimensionMismatchError(expected=num_classes, found=self.num_classes)


def _as_float32(tensor: torch.Tensor) -> bytes:
    return tensor.detach().cpu().to(torch.float32).numpy().astype(_FLOAT).tobytes()


def write_checkpoint(
    path: Union[str, Path],
    model: TrafficModel,
    config: TrainConfig,
    label_names: List[str],
    step: int = 0,
    epoch: int = 0,
    best_loss: Optional[float] = None,
    running: "tuple[float, int]" = (0.0, 0),
    optimizer: Optional[torch.optim.Optimizer] = None,
) -> None:
    """
    Serialize model parameters, configuration and optionally Adam moments

    Args:
        path: Target file, replaced atomically
        model: Trained model
        config: Its training configuration
        label_names: Category names
        step: Optimizer steps taken
        epoch: Completed epochs
        best_loss: Best epoch-mean loss
        running: (loss sum, step count) of the unfinished epoch
        optimizer: Adam optimizer over ``model.parameters()``; omit for inference-only files
    """
    state = model.state_dict()
    names = list(state)
    moments: Optional[List[Dict[str, Any]]] = None
    if optimizer is not None:
        by_param = {id(p): n for n, p in model.named_parameters()}
        per_name = {by_param[id(p)]: optimizer.state.get(p, {}) for group in optimizer.param_groups for p in group["params"]}
        moments = [per_name.get(n, {}) for n in names]

    header = {
        "num_classes": model.dims.num_classes,
        "embed_dim": model.dims.embed_dim,
        "hidden_dim": model.dims.hidden_dim,
        "gnn_layers": model.dims.gnn_layers,
        "label_names": list(label_names),
        "parameters": [[n, list(state[n].shape)] for n in names],
        "config": config.model_dump(mode="json"),
        "step": step,
        "epoch": epoch,
        "best_loss": best_loss,
        "running_loss": running[0],
        "running_steps": running[1],
        "adam_steps": None if moments is None else [float(m["step"]) if "step" in m else 0.0 for m in moments],
    }
    encoded = json.dumps(header, sort_keys=True).encode("utf-8")

    out = io.BytesIO()
    out.write(CHECKPOINT_MAGIC)
    out.write(struct.pack("<HI", CHECKPOINT_VERSION, len(encoded)))
    out.write(encoded)
    for n in names:
        out.write(_as_float32(state[n]))
    if moments is not None:
        for n, m in zip(names, moments):
            for key in ("exp_avg", "exp_avg_sq"):
                out.write(_as_float32(m[key]) if key in m else np.zeros(state[n].numel(), dtype=_FLOAT).tobytes())

    write_atomic(path, append_crc(out.getvalue()))
    logger.debug("wrote checkpoint {} (step {}, epoch {})", path, step, epoch)


def read_checkpoint(path: Union[str, Path]) -> Checkpoint:
    """
    Load a checkpoint written by :func:`write_checkpoint`

    Raises:
        CheckpointError: Missing file or malformed content
        ChecksumError: Truncated or corrupted file
        VersionMismatchError: Unsupported format version
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise CheckpointError("Checkpoint file not found", path=str(file_path))
    body = strip_crc(file_path.read_bytes(), str(file_path))
    reader = ByteReader(body, str(file_path), CheckpointError)
    if reader.take(len(CHECKPOINT_MAGIC)) != CHECKPOINT_MAGIC:
        raise CheckpointError("Not a checkpoint file", path=str(file_path))
    version = reader.u16()
    if version != CHECKPOINT_VERSION:
        raise VersionMismatchError(version, CHECKPOINT_VERSION, path=str(file_path))
    try:
        header = json.loads(reader.take(reader.u32()).decode("utf-8"))
        config = TrainConfig.model_validate(header["config"])
        dims = ModelDims(
            num_classes=int(header["num_classes"]),
            embed_dim=int(header["embed_dim"]),
            hidden_dim=int(header["hidden_dim"]),
            gnn_layers=int(header["gnn_layers"]),
        )
    except (ValueError, KeyError, TypeError) as e:
        raise CheckpointError(f"Invalid checkpoint header: {e}", path=str(file_path)) from e

    model = TrafficModel(dims, gnn_dropout=config.gnn_dropout, lstm_dropout=config.lstm_dropout, seed=config.seed)
    expected = {n: list(t.shape) for n, t in model.state_dict().items()}
    stored = {n: shape for n, shape in header["parameters"]}
    if stored != expected:
        raise CheckpointError("Parameter names or shapes do not match the model layout", path=str(file_path))

    def read_tensor(shape: List[int]) -> torch.Tensor:
        count = int(np.prod(shape)) if shape else 1
        array = np.frombuffer(reader.take(count * _FLOAT.itemsize), dtype=_FLOAT).astype(np.float32)
        return torch.from_numpy(array.reshape(shape))

    state = {n: read_tensor(shape) for n, shape in header["parameters"]}
    model.load_state_dict(state)

    optimizer_state = None
    if header.get("adam_steps") is not None:
        index = {n: i for i, (n, _) in enumerate(model.named_parameters())}
        per_param: Dict[int, Dict[str, torch.Tensor]] = {}
        for (n, shape), adam_step in zip(header["parameters"], header["adam_steps"]):
            exp_avg, exp_avg_sq = read_tensor(shape), read_tensor(shape)
            if adam_step > 0:
                per_param[index[n]] = {
                    "step": torch.tensor(float(adam_step)),
                    "exp_avg": exp_avg,
                    "exp_avg_sq": exp_avg_sq,
                }
        optimizer_state = {"state": per_param, "param_groups": None}
    reader.expect_end()

    return Checkpoint(
        model=model,
        config=config,
        label_names=list(header["label_names"]),
        step=int(header["step"]),
        epoch=int(header["epoch"]),
        best_loss=header.get("best_loss"),
        running_loss=float(header.get("running_loss", 0.0)),
        running_steps=int(header.get("running_steps", 0)),
        optimizer_state=optimizer_state,
    )
