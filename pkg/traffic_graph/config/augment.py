"""
Augmentation Configuration Model
"""

from pydantic import BaseModel, ConfigDict, Field

__all__ = ["AugmentConfig"]


class AugmentConfig(BaseModel):
    """
    View construction settings for contrastive training

    Attributes:
        p_node_drop: Probability of dropping each graph node
        p_edge_drop: Probability of dropping each surviving edge
        p_packet_drop: Probability of dropping each packet of a flow
        augment_header: Whether header graphs are perturbed
        augment_payload: Whether payload graphs are perturbed
        seed: Base seed for the per-sample random streams

    Example:
        Corresponding TOML section::

            [augment]
            p_node_drop = 0.1
            p_edge_drop = 0.05
            p_packet_drop = 0.6
            augment_header = true
            augment_payload = true
    """

    model_config = ConfigDict(extra="forbid", validate_assignment=True)

    p_node_drop: float = Field(default=0.1, ge=0.0, le=1.0)
    p_edge_drop: float = Field(default=0.05, ge=0.0, le=1.0)
    p_packet_drop: float = Field(default=0.6, ge=0.0, le=1.0)
    augment_header: bool = True
    augment_payload: bool = True
    seed: int = Field(default=0, ge=0)
