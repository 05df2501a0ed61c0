"""
Dataset Profiles

Each profile bundles the preprocessing switches and the training
hyper-parameters tuned for one of the four ISCX traffic collections, so a
single ``--profile`` flag reproduces that configuration.
"""

from typing import Any, Dict, List, Optional

from pydantic import BaseModel, ConfigDict

from traffic_graph.constants import DEFAULT_PMI_WINDOW, DEFAULT_TEMPERATURE, TIME_BLOCK_SECONDS
from traffic_graph.exceptions import ConfigurationError

__all__ = ["DatasetProfile", "PROFILES", "get_profile"]


class DatasetProfile(BaseModel):
    """
    Dataset Profile

    Attributes:
        name: Profile key used on the command line
        block_seconds: Split flows into non-overlapping blocks of this length, None disables
        categories: Category names of the corresponding ISCX collection (informational)
        train_defaults: TrainConfig values, nested the same way as the TOML file
    """

    model_config = ConfigDict(frozen=True)

    name: str
    block_seconds: Optional[float] = None
    categories: List[str]
    train_defaults: Dict[str, Any]


def _defaults(
    batch_size: int,
    grad_accumulation: int,
    epochs: int,
    lr: tuple[float, float],
    label_smoothing: float,
    gnn_dropout: float,
    lstm_dropout: float,
    alpha: float,
    beta: float,
) -> Dict[str, Any]:
    # shared across all four collections
    return {
        "batch_size": batch_size,
        "grad_accumulation": grad_accumulation,
        "epochs": epochs,
        "lr_max": lr[0],
        "lr_min": lr[1],
        "warmup_fraction": 0.1,
        "label_smoothing": label_smoothing,
        "gnn_dropout": gnn_dropout,
        "lstm_dropout": lstm_dropout,
        "embed_dim": 64,
        "hidden_dim": 128,
        "pmi_window": DEFAULT_PMI_WINDOW,
        "temperature": DEFAULT_TEMPERATURE,
        "augment": {"p_node_drop": 0.1, "p_edge_drop": 0.05, "p_packet_drop": 0.6},
        "weights": {"alpha": alpha, "beta": beta},
    }


PROFILES: Dict[str, DatasetProfile] = {
    "vpn": DatasetProfile(
        name="vpn",
        categories=["VoIP", "Streaming", "P2P", "File", "Email", "Chat"],
        train_defaults=_defaults(16, 1, 20, (1e-2, 1e-4), 0.0, 0.0, 0.0, alpha=1.0, beta=0.5),
    ),
    "nonvpn": DatasetProfile(
        name="nonvpn",
        categories=["VoIP", "Video", "Streaming", "File", "Email", "Chat"],
        train_defaults=_defaults(102, 5, 120, (1e-2, 1e-5), 0.01, 0.1, 0.15, alpha=0.4, beta=0.8),
    ),
    "tor": DatasetProfile(
        name="tor",
        block_seconds=TIME_BLOCK_SECONDS,
        categories=["VoIP", "Video", "P2P", "Mail", "File", "Chat", "Browsing", "Audio"],
        train_defaults=_defaults(32, 1, 100, (1e-2, 1e-4), 0.0, 0.0, 0.0, alpha=0.4, beta=1.0),
    ),
    "nontor": DatasetProfile(
        name="nontor",
        categories=["VoIP", "Video", "P2P", "FTP", "Email", "Chat", "Browsing", "Audio"],
        train_defaults=_defaults(102, 5, 120, (1e-2, 1e-4), 0.0, 0.2, 0.1, alpha=0.6, beta=1.0),
    ),
}


def get_profile(name: str) -> DatasetProfile:
    """
    Look up a profile by name

    Raises:
        ConfigurationError: Unknown profile name
    """
    try:
        return PROFILES[name]
    except KeyError:
        raise ConfigurationError(
            f"Unknown profile '{name}', expected one of: {', '.join(PROFILES)}", config_key="profile"
        ) from None
