"""
Reverse-mode gradients with finiteness checks
"""

import torch
from torch import Tensor, nn

from traffic_graph.exceptions import GradientError, LossError

__all__ = ["backward"]


def backward(loss: Tensor, model: nn.Module) -> None:
    """
    Accumulate d(loss)/d(param) into every parameter's ``grad``

    Parameters the loss does not depend on end up with an exact zero gradient
    rather than None.

    Args:
        loss: Scalar loss of a completed forward pass
        model: Module whose parameters receive gradients

    Raises:
        LossError: loss is not a scalar
        GradientError: A gradient holds NaN or Inf; names the parameter
    """
    if loss.dim() != 0:
        raise LossError(f"Expected a scalar loss, got shape {tuple(loss.shape)}")
    if loss.requires_grad:
        loss.backward()
    for name, param in model.named_parameters():
        if param.grad is None:
            param.grad = torch.zeros_like(param)
        elif not torch.isfinite(param.grad).all():
            raise GradientError(name)
