"""
Learning-rate schedule: linear warm-up to lr_max, then cosine decay to lr_min
"""

import math

from traffic_graph.config.training import TrainConfig

__all__ = ["lr_at", "steps_per_epoch"]


def steps_per_epoch(num_flows: int, cfg: TrainConfig) -> int:
    """Optimizer steps per epoch, ceil(ceil(flows / batch) / accumulation)"""
    micro_batches = math.ceil(num_flows / cfg.batch_size)
    return math.ceil(micro_batches / cfg.grad_accumulation)


def lr_at(step: int, total_steps: int, cfg: TrainConfig) -> float:
    """
    Learning rate at an optimizer step

    Args:
        step: Step number in [0, total_steps]
        total_steps: Steps of the whole run
        cfg: Supplies lr_max, lr_min and warmup_fraction

    Returns:
        0 at step 0 with warm-up, lr_max at the end of warm-up, lr_min at total_steps

    Raises:
        ValueError: step outside [0, total_steps]
    """
    if not 0 <= step <= total_steps:
        raise ValueError(f"step must be in [0, {total_steps}], got {step}")
    warmup = cfg.warmup_fraction * total_steps
    if step < warmup:
        return cfg.lr_max * step / warmup
    if total_steps <= warmup:
        return cfg.lr_max
    progress = (step - warmup) / (total_steps - warmup)
    return cfg.lr_min + 0.5 * (cfg.lr_max - cfg.lr_min) * (1.0 + math.cos(math.pi * progress))
