"""
Training Configuration Models

TrainConfig mirrors the TOML training file one-to-one. Values are layered
in this order: dataset profile, TOML file, ablation variant, command-line
overrides.
"""

from pathlib import Path
from typing import Any, Dict, Mapping, Optional

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from traffic_graph.config.augment import AugmentConfig
from traffic_graph.config.loader import read_toml
from traffic_graph.config.profiles import get_profile
from traffic_graph.constants import (
    DEFAULT_EMBED_DIM,
    DEFAULT_GNN_LAYERS,
    DEFAULT_HIDDEN_DIM,
    DEFAULT_PMI_WINDOW,
    DEFAULT_TEMPERATURE,
    FLOW_LENGTH_CAP,
)
from traffic_graph.exceptions import ConfigurationError

__all__ = [
    "LossWeights",
    "TrainConfig",
    "VARIANTS",
    "apply_overrides",
    "build_train_config",
]


class LossWeights(BaseModel):
    """
    Coefficients of the contrastive terms in the training objective

    Attributes:
        alpha: Weight of the packet-level contrastive loss
        beta: Weight of the flow-level contrastive loss
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    alpha: float = Field(default=1.0, ge=0.0, le=1.0)
    beta: float = Field(default=0.5, ge=0.0, le=1.0)


class TrainConfig(BaseModel):
    """
    Training Configuration

    Example:
        Corresponding TOML file format::

            profile = "vpn"
            variant = "full"
            epochs = 10
            seed = 7

            [augment]
            p_node_drop = 0.1

            [weights]
            alpha = 1.0
            beta = 0.5
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    profile: Optional[str] = None
    variant: str = "full"

    batch_size: int = Field(default=16, ge=1)
    grad_accumulation: int = Field(default=1, ge=1)
    epochs: int = Field(default=20, ge=1)
    lr_max: float = Field(default=1e-2, gt=0.0)
    lr_min: float = Field(default=1e-4, gt=0.0)
    warmup_fraction: float = Field(default=0.1, ge=0.0, lt=1.0)
    label_smoothing: float = Field(default=0.0, ge=0.0, lt=1.0)
    gnn_dropout: float = Field(default=0.0, ge=0.0, lt=1.0)
    lstm_dropout: float = Field(default=0.0, ge=0.0, lt=1.0)

    embed_dim: int = Field(default=DEFAULT_EMBED_DIM, ge=1)
    hidden_dim: int = Field(default=DEFAULT_HIDDEN_DIM, ge=1)
    gnn_layers: int = Field(default=DEFAULT_GNN_LAYERS, ge=1)
    # must equal the window the dataset graphs were built with
    pmi_window: int = Field(default=DEFAULT_PMI_WINDOW, ge=2)
    # training flows are cut to their first flow_len_cap packets
    flow_len_cap: int = Field(default=FLOW_LENGTH_CAP, ge=1, le=255)
    temperature: float = Field(default=DEFAULT_TEMPERATURE, gt=0.0)

    augment: AugmentConfig = Field(default_factory=AugmentConfig)
    weights: LossWeights = Field(default_factory=LossWeights)

    enable_pcls: bool = True
    enable_fcls: bool = True
    enable_pcl: bool = True
    enable_fcl: bool = True
    use_unsupervised_cl: bool = False

    seed: int = Field(default=0, ge=0)
    threads: int = Field(default=1, ge=1)
    checkpoint_every: int = Field(default=0, ge=0)

    @model_validator(mode="after")
    def check_ranges(self) -> "TrainConfig":
        if self.lr_min > self.lr_max:
            raise ValueError(f"lr_min ({self.lr_min}) must not exceed lr_max ({self.lr_max})")
        if not (self.enable_pcls or self.enable_fcls or self.enable_pcl or self.enable_fcl):
            raise ValueError("at least one loss term must be enabled")
        return self

    @property
    def uses_flow_level(self) -> bool:
        """Whether the sequence encoder runs at all"""
        return self.enable_fcls or self.enable_fcl


# Ablation variants: switch values applied on top of the profile
VARIANTS: Dict[str, Dict[str, Any]] = {
    "full": {},
    "no-fcls": {"enable_fcls": False},
    "no-fcl": {"enable_fcl": False},
    "no-fcls-fcl": {"enable_fcls": False, "enable_fcl": False},
    "no-pcls": {"enable_pcls": False},
    "no-pcl": {"enable_pcl": False},
    "no-pcls-pcl": {"enable_pcls": False, "enable_pcl": False},
    "no-header-aug": {"augment.augment_header": False},
    "no-payload-aug": {"augment.augment_payload": False},
    "no-graph-aug": {"augment.augment_header": False, "augment.augment_payload": False},
    "unsupervised-cl": {"use_unsupervised_cl": True},
    "no-aug-cl": {"enable_pcl": False, "enable_fcl": False},
}

_SECTIONS: Dict[str, type[BaseModel]] = {"augment": AugmentConfig, "weights": LossWeights}


def _resolve_key(key: str) -> tuple[Optional[str], str]:
    """
    Map a flat or dotted override key onto (section, field)

    ``p-node-drop``, ``p_node_drop`` and ``augment.p_node_drop`` all resolve to
    ``("augment", "p_node_drop")``.
    """
    name = key.strip().lstrip("-").replace("-", "_")
    if "." in name:
        section, _, field = name.partition(".")
        if section in _SECTIONS and field in _SECTIONS[section].model_fields:
            return section, field
        raise ConfigurationError(f"Unknown configuration key: {key}", config_key=key)
    if name in TrainConfig.model_fields and name not in _SECTIONS:
        return None, name
    for section, model in _SECTIONS.items():
        if name in model.model_fields:
            return section, name
    raise ConfigurationError(f"Unknown configuration key: {key}", config_key=key)


def apply_overrides(values: Dict[str, Any], overrides: Mapping[str, Any]) -> Dict[str, Any]:
    """
    Apply flat overrides to a nested configuration dictionary

    Args:
        values: Nested configuration values (not modified)
        overrides: Flat key/value pairs; string values are coerced by validation later

    Returns:
        New nested dictionary

    Raises:
        ConfigurationError: Unknown key
    """
    merged: Dict[str, Any] = {k: (dict(v) if isinstance(v, dict) else v) for k, v in values.items()}
    for key, value in overrides.items():
        section, field = _resolve_key(key)
        if section is None:
            merged[field] = value
        else:
            merged.setdefault(section, {})
            merged[section][field] = value
    return merged


def _merge(base: Dict[str, Any], update: Mapping[str, Any]) -> Dict[str, Any]:
    merged: Dict[str, Any] = {k: (dict(v) if isinstance(v, dict) else v) for k, v in base.items()}
    for key, value in update.items():
        if isinstance(value, Mapping) and isinstance(merged.get(key), dict):
            merged[key].update(value)
        else:
            merged[key] = value
    return merged


def build_train_config(
    profile: Optional[str] = None,
    config_file: Optional[Path] = None,
    variant: Optional[str] = None,
    overrides: Optional[Mapping[str, Any]] = None,
) -> TrainConfig:
    """
    Assemble a TrainConfig from profile, file, variant and overrides

    Args:
        profile: Profile name; falls back to the file's ``profile`` key, then ``vpn``
        config_file: Optional TOML training file
        variant: Ablation variant; falls back to the file's ``variant`` key, then ``full``
        overrides: Flat overrides, typically from the command line

    Returns:
        Validated TrainConfig

    Raises:
        ConfigurationError: Unknown profile, variant or key, or invalid values
    """
    file_values: Dict[str, Any] = read_toml(config_file) if config_file is not None else {}
    profile_name = profile or file_values.get("profile") or "vpn"
    variant_name = variant or file_values.get("variant") or "full"
    if variant_name not in VARIANTS:
        raise ConfigurationError(
            f"Unknown variant '{variant_name}', expected one of: {', '.join(VARIANTS)}", config_key="variant"
        )

    values = _merge(get_profile(profile_name).train_defaults, file_values)
    values = apply_overrides(values, VARIANTS[variant_name])
    values = apply_overrides(values, overrides or {})
    values["profile"] = profile_name
    values["variant"] = variant_name

    try:
        return TrainConfig.model_validate(values)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(p) for p in first.get("loc", ()))
        raise ConfigurationError(f"Invalid configuration: {key}: {first.get('msg')}", config_key=key) from e
