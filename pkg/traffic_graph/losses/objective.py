"""
Combined Training Objective

L = L_pcls + L_fcls + alpha L_pcl + beta L_fcl. A term passed as None is
switched off and contributes exactly nothing.
"""

import math
from dataclasses import dataclass
from typing import Dict, Optional, Union

import torch
from torch import Tensor

from traffic_graph.config.training import LossWeights
from traffic_graph.exceptions import LossError

__all__ = ["LossTerms", "LossWeights", "total_loss"]

Scalar = Union[Tensor, float]


@dataclass(frozen=True)
class LossTerms:
    """
    The four loss terms of one step, None when disabled or skipped
    """

    pcls: Optional[Scalar] = None
    fcls: Optional[Scalar] = None
    pcl: Optional[Scalar] = None
    fcl: Optional[Scalar] = None

    def values(self) -> Dict[str, float]:
        """Plain floats for logging; disabled terms read 0"""
        return {
            name: float(value.detach()) if isinstance(value, Tensor) else float(value or 0.0)
            for name, value in (("pcls", self.pcls), ("fcls", self.fcls), ("pcl", self.pcl), ("fcl", self.fcl))
        }

    def total(self, weights: LossWeights) -> Tensor:
        return total_loss(self.pcls, self.fcls, self.pcl, self.fcl, weights)


def _finite(value: Scalar) -> bool:
    if isinstance(value, Tensor):
        return bool(torch.isfinite(value.detach()).all())
    return math.isfinite(value)


def total_loss(
    pcls: Optional[Scalar],
    fcls: Optional[Scalar],
    pcl: Optional[Scalar],
    fcl: Optional[Scalar],
    weights: LossWeights,
) -> Tensor:
    """
    Weighted sum of the enabled terms

    >>> float(total_loss(1.0, 2.0, 3.0, 4.0, LossWeights(alpha=1.0, beta=0.5)))
    8.0

    Raises:
        LossError: Every term disabled, or a NaN/Inf term (named)
    """
    parts = []
    for name, value, coefficient in (
        ("pcls", pcls, 1.0),
        ("fcls", fcls, 1.0),
        ("pcl", pcl, weights.alpha),
        ("fcl", fcl, weights.beta),
    ):
        if value is None:
            continue
        if not _finite(value):
            raise LossError(f"Loss term '{name}' is not finite", term=name)
        term = value if isinstance(value, Tensor) else torch.tensor(float(value), dtype=torch.float64)
        parts.append(term if coefficient == 1.0 else coefficient * term)
    if not parts:
        raise LossError("Every loss term is disabled")
    total = parts[0]
    for part in parts[1:]:
        total = total + part
    return total
