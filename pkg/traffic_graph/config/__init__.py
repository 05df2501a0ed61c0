"""
Config Module

Provides configuration management functionality.
"""

from traffic_graph.config.augment import AugmentConfig
from traffic_graph.config.loader import ConfigLoader, read_toml
from traffic_graph.config.manifest import CaptureEntry, DatasetManifest
from traffic_graph.config.profiles import PROFILES, DatasetProfile, get_profile
from traffic_graph.config.training import VARIANTS, LossWeights, TrainConfig, apply_overrides, build_train_config

__all__ = [
    "AugmentConfig",
    "CaptureEntry",
    "ConfigLoader",
    "DatasetManifest",
    "DatasetProfile",
    "LossWeights",
    "PROFILES",
    "TrainConfig",
    "VARIANTS",
    "apply_overrides",
    "build_train_config",
    "get_profile",
    "read_toml",
]
