"""
Stratified flow-level split

Packets follow their flows: the packet-level train/test sets are exactly the
packets of the flow-level splits.
"""

import math
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple, TypeVar

import numpy as np

from traffic_graph.constants import DEFAULT_TRAIN_RATIO, STREAM_SPLIT
from traffic_graph.exceptions import SplitError

__all__ = ["stratified_split", "split_indices"]

F = TypeVar("F")


def split_indices(
    labels: Sequence[int],
    ratio: float = DEFAULT_TRAIN_RATIO,
    seed: int = 0,
    label_names: Optional[Sequence[str]] = None,
) -> Tuple[List[int], List[int]]:
    """
    Per-label split of sample positions

    Each label with n samples contributes min(ceil(ratio * n), n - 1) samples
    to the training side, so both sides always see every label.

    Args:
        labels: Label index per sample
        ratio: Training fraction
        seed: Shuffle seed
        label_names: Names used in error messages

    Returns:
        (train positions, test positions), each in ascending order

    Raises:
        SplitError: A label has fewer than 2 samples
    """
    if not 0.0 < ratio < 1.0:
        raise ValueError(f"ratio must be in (0, 1), got {ratio}")

    by_label: Dict[int, List[int]] = defaultdict(list)
    for position, label in enumerate(labels):
        by_label[label].append(position)

    rng = np.random.default_rng([seed, STREAM_SPLIT])
    train: List[int] = []
    test: List[int] = []
    for label in sorted(by_label):
        positions = by_label[label]
        if len(positions) < 2:
            name = label_names[label] if label_names is not None else str(label)
            raise SplitError(name, len(positions))
        n_train = min(math.ceil(ratio * len(positions)), len(positions) - 1)
        order = rng.permutation(len(positions))
        train.extend(positions[i] for i in order[:n_train])
        test.extend(positions[i] for i in order[n_train:])

    return sorted(train), sorted(test)


def stratified_split(
    flows: Sequence[F],
    ratio: float = DEFAULT_TRAIN_RATIO,
    seed: int = 0,
    label_names: Optional[Sequence[str]] = None,
) -> Tuple[List[F], List[F]]:
    """
    Split flows per label into train and test sets

    Args:
        flows: Objects with an integer ``label`` attribute
        ratio: Training fraction
        seed: Shuffle seed; the same seed always yields the same partition
        label_names: Names used in error messages

    Returns:
        (train flows, test flows), each in input order
    """
    train_idx, test_idx = split_indices([f.label for f in flows], ratio, seed, label_names)  # type: ignore[attr-defined]
    return [flows[i] for i in train_idx], [flows[i] for i in test_idx]
