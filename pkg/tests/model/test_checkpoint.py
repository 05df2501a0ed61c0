"""
Checkpoint File Codec Unit Tests
"""

import json
import struct
import zlib
from pathlib import Path
from typing import Callable

import pytest
import torch

from traffic_graph.config import TrainConfig
from traffic_graph.exceptions import CheckpointError, ChecksumError, DimensionMismatchError, VersionMismatchError
from traffic_graph.model import ModelDims, TrafficModel, read_checkpoint, write_checkpoint

LABELS = ["chat", "email", "video"]


def tiny_model(cfg: TrainConfig, seed: int = 5) -> TrafficModel:
    return TrafficModel(ModelDims(len(LABELS), cfg.embed_dim, cfg.hidden_dim, cfg.gnn_layers), seed=seed)


def rewrite(path: Path, edit: Callable[[bytes, dict, bytes], bytes]) -> None:
    """Let ``edit`` rebuild the body from (magic, header, payload), then fix the trailer"""
    body = path.read_bytes()[:-4]
    (length,) = struct.unpack("<I", body[6:10])
    header = json.loads(body[10 : 10 + length])
    new_body = edit(body[:4], header, body[10 + length :])
    path.write_bytes(new_body + struct.pack("<I", zlib.crc32(new_body) & 0xFFFFFFFF))


def pack(magic: bytes, header: dict, payload: bytes, version: int = 1) -> bytes:
    encoded = json.dumps(header).encode("utf-8")
    return magic + struct.pack("<HI", version, len(encoded)) + encoded + payload


class TestCheckpointRoundTrip:
    """Write/read tests"""

    def test_parameters_exact(self, tiny_config: TrainConfig, tmp_path: Path):
        """Test float32 parameters come back bit for bit"""
        model = tiny_model(tiny_config)
        write_checkpoint(tmp_path / "m.ckpt", model, tiny_config, LABELS)

        restored = read_checkpoint(tmp_path / "m.ckpt")

        for name, tensor in model.state_dict().items():
            assert torch.equal(restored.model.state_dict()[name], tensor), name

    def test_metadata(self, tiny_config: TrainConfig, tmp_path: Path):
        """Test configuration, labels and counters survive"""
        write_checkpoint(
            tmp_path / "m.ckpt",
            tiny_model(tiny_config),
            tiny_config,
            LABELS,
            step=12,
            epoch=3,
            best_loss=0.75,
            running=(2.5, 4),
        )

        restored = read_checkpoint(tmp_path / "m.ckpt")

        assert restored.config == tiny_config
        assert restored.label_names == LABELS
        assert restored.num_classes == 3
        assert (restored.step, restored.epoch, restored.best_loss) == (12, 3, 0.75)
        assert (restored.running_loss, restored.running_steps) == (2.5, 4)
        assert restored.optimizer_state is None

    def test_adam_moments(self, tiny_config: TrainConfig, tmp_path: Path):
        """Test first and second moments are restored per parameter"""
        model = tiny_model(tiny_config)
        optimizer = torch.optim.Adam(model.parameters(), lr=1e-3, foreach=False)
        model.fusion.bias.sum().backward()
        optimizer.step()
        write_checkpoint(tmp_path / "m.ckpt", model, tiny_config, LABELS, step=1, optimizer=optimizer)

        restored = read_checkpoint(tmp_path / "m.ckpt")

        position = [name for name, _ in model.named_parameters()].index("fusion.bias")
        saved = restored.optimizer_state["state"][position]
        assert torch.equal(saved["exp_avg"], optimizer.state[model.fusion.bias]["exp_avg"])
        assert torch.equal(saved["exp_avg_sq"], optimizer.state[model.fusion.bias]["exp_avg_sq"])
        assert saved["step"].item() == 1.0

    def test_rewrite_identical(self, tiny_config: TrainConfig, tmp_path: Path):
        """Test writing a restored checkpoint reproduces the file"""
        write_checkpoint(tmp_path / "a.ckpt", tiny_model(tiny_config), tiny_config, LABELS, step=2)
        restored = read_checkpoint(tmp_path / "a.ckpt")
        write_checkpoint(tmp_path / "b.ckpt", restored.model, restored.config, restored.label_names, step=restored.step)

        assert (tmp_path / "a.ckpt").read_bytes() == (tmp_path / "b.ckpt").read_bytes()


class TestCheckpointErrors:
    """Corruption and mismatch tests"""

    @pytest.fixture
    def saved(self, tiny_config: TrainConfig, tmp_path: Path) -> Path:
        path = tmp_path / "m.ckpt"
        write_checkpoint(path, tiny_model(tiny_config), tiny_config, LABELS)
        return path

    def test_missing(self, tmp_path: Path):
        """Test a path that does not exist"""
        with pytest.raises(CheckpointError, match="not found"):
            read_checkpoint(tmp_path / "none.ckpt")

    def test_truncated(self, saved: Path):
        """Test a cut file fails its checksum"""
        saved.write_bytes(saved.read_bytes()[:-100])
        with pytest.raises(ChecksumError):
            read_checkpoint(saved)

    def test_bad_magic(self, saved: Path):
        """Test a dataset file handed over as a checkpoint"""
        rewrite(saved, lambda magic, header, payload: pack(b"CTFE", header, payload))
        with pytest.raises(CheckpointError, match="Not a checkpoint"):
            read_checkpoint(saved)

    def test_version(self, saved: Path):
        """Test a future format version"""
        rewrite(saved, lambda magic, header, payload: pack(magic, header, payload, version=2))
        with pytest.raises(VersionMismatchError):
            read_checkpoint(saved)

    def test_layout_mismatch(self, saved: Path):
        """Test stored parameter shapes must match the model"""

        def shrink(magic: bytes, header: dict, payload: bytes) -> bytes:
            header["parameters"][0][1] = [255, header["parameters"][0][1][1]]
            return pack(magic, header, payload)

        rewrite(saved, shrink)
        with pytest.raises(CheckpointError, match="do not match"):
            read_checkpoint(saved)

    def test_bad_header(self, saved: Path):
        """Test a header missing required keys"""

        def strip(magic: bytes, header: dict, payload: bytes) -> bytes:
            del header["hidden_dim"]
            return pack(magic, header, payload)

        rewrite(saved, strip)
        with pytest.raises(CheckpointError, match="Invalid checkpoint header"):
            read_checkpoint(saved)

    def test_class_count(self, saved: Path):
        """Test a dataset with another class count"""
        with pytest.raises(DimensionMismatchError) as exc_info:
            read_checkpoint(saved).check_classes(4)
        assert (exc_info.value.expected, exc_info.value.found) == (4, 3)
