"""
Contrastive Losses

Both losses work on 2N L2-normalized embeddings: N anchor views followed by
the N index-aligned augmented views, so the twin of sample i is i +- N. They
share one implementation and differ only in the positive set: every other
same-label sample (supervised), or just the twin (unsupervised). Each is
averaged over the 2N samples.
"""

from dataclasses import dataclass

import torch
import torch.nn.functional as F
from torch import Tensor

from traffic_graph.exceptions import LossError

__all__ = ["ContrastiveBatch", "supcon_loss", "unsup_con_loss"]

_UNIT_NORM_TOLERANCE = 1e-6


@dataclass(frozen=True)
class ContrastiveBatch:
    """
    Paired views ready for a contrastive loss

    Attributes:
        embeddings: (2N, d) unit-norm vectors, anchors first
        labels: (2N,) category of each vector; twins share labels
        temperature: Softmax temperature, > 0
    """

    embeddings: Tensor
    labels: Tensor
    temperature: float

    def __post_init__(self) -> None:
        if not self.temperature > 0:
            raise LossError(f"Temperature must be positive, got {self.temperature}")
        size = self.embeddings.shape[0]
        if self.embeddings.dim() != 2 or size % 2 or self.labels.shape != (size,):
            raise LossError(
                f"Expected (2N, d) embeddings with 2N labels, got {tuple(self.embeddings.shape)} "
                f"and {tuple(self.labels.shape)}"
            )
        norms = self.embeddings.detach().norm(dim=1)
        if not torch.all((norms - 1.0).abs() <= _UNIT_NORM_TOLERANCE):
            raise LossError("Contrastive embeddings must be L2-normalized")
        half = size // 2
        if not torch.equal(self.labels[:half], self.labels[half:]):
            raise LossError("Paired views must share their labels")

    @classmethod
    def from_views(cls, anchor: Tensor, augmented: Tensor, labels: Tensor, temperature: float) -> "ContrastiveBatch":
        """
        Normalize and stack the two views

        Args:
            anchor: (N, d) anchor-view embeddings
            augmented: (N, d) augmented-view embeddings, index-aligned with ``anchor``
            labels: (N,) sample labels
            temperature: Softmax temperature

        Raises:
            LossError: Mismatching shapes, zero-norm embedding or temperature <= 0
        """
        if not temperature > 0:
            raise LossError(f"Temperature must be positive, got {temperature}")
        if anchor.shape != augmented.shape or anchor.shape[0] != labels.shape[0]:
            raise LossError(
                f"View shapes {tuple(anchor.shape)} and {tuple(augmented.shape)} "
                f"do not match {labels.shape[0]} label(s)"
            )
        stacked = torch.cat([anchor, augmented])
        if torch.any(stacked.detach().norm(dim=1) == 0):
            raise LossError("Cannot normalize a zero-norm embedding")
        return cls(F.normalize(stacked, dim=1), torch.cat([labels, labels]), temperature)

    @property
    def size(self) -> int:
        return int(self.embeddings.shape[0])

    def twin_mask(self) -> Tensor:
        """(2N, 2N) mask, True at (i, j(i))"""
        size, half = self.size, self.size // 2
        index = torch.arange(size)
        mask = torch.zeros(size, size, dtype=torch.bool)
        mask[index, (index + half) % size] = True
        return mask

    def label_mask(self) -> Tensor:
        """(2N, 2N) mask, True where labels agree, diagonal excluded"""
        same = self.labels.unsqueeze(0) == self.labels.unsqueeze(1)
        return same & ~torch.eye(self.size, dtype=torch.bool)


def _contrastive_loss(z: Tensor, positives: Tensor, temperature: float) -> Tensor:
    size = z.shape[0]
    self_mask = torch.eye(size, dtype=torch.bool)
    logits = (z @ z.T / temperature).masked_fill(self_mask, float("-inf"))
    # logsumexp subtracts the row maximum internally
    log_prob = logits - torch.logsumexp(logits, dim=1, keepdim=True)
    counts = positives.sum(dim=1)
    summed = log_prob.masked_fill(~positives, 0.0).sum(dim=1)
    per_sample = torch.where(counts > 0, -summed / counts.clamp(min=1), torch.zeros_like(summed))
    return per_sample.sum() / size


def _check_size(batch: ContrastiveBatch) -> None:
    if batch.size < 4:
        raise LossError(f"Contrastive losses need at least 2 samples (4 views), got {batch.size} view(s)")


def supcon_loss(batch: ContrastiveBatch) -> Tensor:
    """
    Supervised contrastive loss

    For each i, the mean over same-label j != i of
    -log(exp(z_i.z_j / t) / sum_{k != i} exp(z_i.z_k / t)), averaged over 2N.

    Raises:
        LossError: Fewer than 4 views
    """
    _check_size(batch)
    return _contrastive_loss(batch.embeddings, batch.label_mask(), batch.temperature)


def unsup_con_loss(batch: ContrastiveBatch) -> Tensor:
    """
    Contrastive loss whose only positive is each sample's twin view

    Raises:
        LossError: Fewer than 4 views
    """
    _check_size(batch)
    return _contrastive_loss(batch.embeddings, batch.twin_mask(), batch.temperature)
