"""
Training Loop

One run trains both levels: every micro-batch builds anchor and augmented
views, computes the enabled loss terms and accumulates gradients; an
optimizer step follows every ``grad_accumulation`` micro-batches. Shuffling,
augmentation and dropout draw from streams derived from the seed and the
position in the run, so a resumed run continues bit for bit.
"""

import math
from pathlib import Path
from typing import Dict, List, Optional, Sequence, TextIO, Tuple, Union

import numpy as np
import torch
from loguru import logger

from traffic_graph.augment.views import derive_rng, drop_packets, make_packet_view
from traffic_graph.config.training import TrainConfig
from traffic_graph.constants import STREAM_DROPOUT, STREAM_GRAPH_AUGMENT, STREAM_PACKET_DROP, STREAM_SHUFFLE
from traffic_graph.dataset.records import Dataset, FlowRecord, Split
from traffic_graph.exceptions import DatasetError, DimensionMismatchError, LossError, TrainingDivergedError
from traffic_graph.losses.classification import head_loss
from traffic_graph.losses.contrastive import ContrastiveBatch, supcon_loss, unsup_con_loss
from traffic_graph.losses.objective import LossTerms
from traffic_graph.model.batch import collate_flows, collate_graphs
from traffic_graph.model.gradients import backward
from traffic_graph.model.network import EmbeddingSource, PacketEmbedding, TrafficModel, torch_seed
from traffic_graph.train.schedule import lr_at, steps_per_epoch
from traffic_graph.train.state import TrainState

__all__ = ["LOG_COLUMNS", "accumulate_gradients", "compute_terms", "epoch_order", "train"]

LOG_COLUMNS = ("step", "lr", "pcls", "fcls", "pcl", "fcl", "total")


def epoch_order(num_flows: int, seed: int, epoch: int) -> np.ndarray:
    """Flow visiting order of one epoch"""
    return derive_rng(seed, STREAM_SHUFFLE, epoch).permutation(num_flows)


def _augmented_packets(
    model: TrafficModel,
    flows: Sequence[FlowRecord],
    flow_ids: Sequence[int],
    cfg: TrainConfig,
    epoch: int,
) -> PacketEmbedding:
    headers, payloads = [], []
    for flow, flow_id in zip(flows, flow_ids):
        for k, record in enumerate(flow.packets):
            rng = derive_rng(cfg.seed, STREAM_GRAPH_AUGMENT, cfg.augment.seed, epoch, flow_id, k)
            header, payload = make_packet_view(record.header_graph, record.payload_graph, cfg.augment, rng)
            headers.append(header)
            payloads.append(payload)
    return model.encode_packets(collate_graphs(headers), collate_graphs(payloads), EmbeddingSource.AUGMENTED)


def compute_terms(
    model: TrafficModel,
    flows: Sequence[FlowRecord],
    flow_ids: Sequence[int],
    cfg: TrainConfig,
    epoch: int,
) -> LossTerms:
    """
    Loss terms of one micro-batch

    Classification terms see anchor embeddings only. The packet-level
    contrastive term pairs every packet with its graph-augmented view; the
    flow-level term pairs every flow with the LSTM run over the graph-augmented
    packet views that survive packet dropping. A contrastive term with fewer
    than 2 samples is skipped.

    Args:
        model: Network in training mode
        flows: Flows of the micro-batch
        flow_ids: Stable dataset index of each flow, used to derive its random streams
        cfg: Training configuration
        epoch: Epoch number, mixed into the augmentation streams

    Returns:
        LossTerms with None for disabled or skipped terms
    """
    labels = [f.label for f in flows]
    batch = collate_flows([[(p.header_graph, p.payload_graph) for p in f.packets] for f in flows], labels)
    packets, flow_vectors = model(batch, EmbeddingSource.ANCHOR, with_flows=cfg.uses_flow_level)
    contrastive = unsup_con_loss if cfg.use_unsupervised_cl else supcon_loss
    smoothing = cfg.label_smoothing

    pcls = head_loss(model.packet_head, packets, batch.packet_labels, smoothing) if cfg.enable_pcls else None
    fcls = None
    if cfg.enable_fcls and flow_vectors is not None:
        fcls = head_loss(model.flow_head, flow_vectors, batch.labels, smoothing)

    with_pcl = cfg.enable_pcl and batch.num_packets >= 2
    with_fcl = cfg.enable_fcl and flow_vectors is not None and batch.num_flows >= 2
    augmented = _augmented_packets(model, flows, flow_ids, cfg, epoch) if with_pcl or with_fcl else None

    pcl = None
    if with_pcl and augmented is not None:
        pcl = contrastive(
            ContrastiveBatch.from_views(packets.vectors, augmented.vectors, batch.packet_labels, cfg.temperature)
        )

    fcl = None
    if with_fcl and augmented is not None and flow_vectors is not None:
        keep = [
            drop_packets(
                f.num_packets,
                cfg.augment.p_packet_drop,
                derive_rng(cfg.seed, STREAM_PACKET_DROP, cfg.augment.seed, epoch, flow_id),
            )
            for f, flow_id in zip(flows, flow_ids)
        ]
        mask = torch.from_numpy(np.concatenate(keep))
        dropped = model.encode_flows(
            augmented.vectors[mask], [int(k.sum()) for k in keep], EmbeddingSource.AUGMENTED
        )
        fcl = contrastive(
            ContrastiveBatch.from_views(flow_vectors.vectors, dropped.vectors, batch.labels, cfg.temperature)
        )

    return LossTerms(pcls=pcls, fcls=fcls, pcl=pcl, fcl=fcl)


def accumulate_gradients(
    model: TrafficModel,
    flows: Sequence[FlowRecord],
    group: Sequence[np.ndarray],
    cfg: TrainConfig,
    step: int,
    epoch: int,
) -> Tuple[int, Dict[str, float]]:
    """
    Backpropagate the micro-batches of one optimizer step

    The accumulated gradient is the mean over the micro-batches that had an
    active loss term; micro-batches without one are skipped.

    Args:
        model: Network in training mode with cleared gradients
        flows: Training flows
        group: Flow indices of each micro-batch
        cfg: Training configuration
        step: Optimizer step about to be taken
        epoch: Current epoch

    Returns:
        (micro-batches used, summed loss terms plus ``total``)

    Raises:
        TrainingDivergedError: A loss term became NaN or infinite
    """
    sums: Dict[str, float] = dict.fromkeys(LOG_COLUMNS[2:], 0.0)
    used = 0
    for position, ids in enumerate(group):
        torch.manual_seed(torch_seed(cfg.seed, STREAM_DROPOUT, step, position))
        terms = compute_terms(model, [flows[i] for i in ids], [int(i) for i in ids], cfg, epoch)
        try:
            total = terms.total(cfg.weights)
        except LossError as e:
            if e.term is None:
                logger.debug("step {}: micro-batch {} has no active loss term", step, position)
                continue
            raise TrainingDivergedError(step, e.term) from e
        backward(total / len(group), model)
        used += 1
        for name, value in terms.values().items():
            sums[name] += value
        sums["total"] += float(total.detach())

    if 0 < used < len(group):
        with torch.no_grad():
            for param in model.parameters():
                if param.grad is not None:
                    param.grad.mul_(len(group) / used)
    return used, sums


def _open_log(path: Optional[Union[str, Path]], append: bool) -> Optional[TextIO]:
    if path is None:
        return None
    log_path = Path(path)
    log_path.parent.mkdir(parents=True, exist_ok=True)
    fresh = not append or not log_path.exists() or log_path.stat().st_size == 0
    handle = open(log_path, "a" if not fresh else "w", encoding="utf-8")
    if fresh:
        handle.write("\t".join(LOG_COLUMNS) + "\n")
    return handle


def _check_dataset(dataset: Dataset, train_flows: List[FlowRecord], state: TrainState) -> None:
    if dataset.num_classes < 2:
        raise DatasetError("Training needs at least 2 labels")
    if state.model.dims.num_classes != dataset.num_classes:
        raise DimensionMismatchError(expected=dataset.num_classes, found=state.model.dims.num_classes)
    if state.config.pmi_window != dataset.pmi_window:
        raise DatasetError(
            f"Graphs were built with PMI window {dataset.pmi_window}, "
            f"the configuration expects {state.config.pmi_window} (set pmi_window to match)"
        )
    present = {f.label for f in train_flows}
    missing = [name for i, name in enumerate(dataset.label_names) if i not in present]
    if missing:
        raise DatasetError(f"Label(s) missing from the training split: {', '.join(missing)}")


def train(
    dataset: Dataset,
    cfg: Optional[TrainConfig] = None,
    out: Optional[Union[str, Path]] = None,
    state: Optional[TrainState] = None,
    log_path: Optional[Union[str, Path]] = None,
    max_steps: Optional[int] = None,
) -> TrainState:
    """
    Train (or continue training) on the dataset's training split

    Args:
        dataset: Preprocessed dataset
        cfg: Training configuration; taken from ``state`` when resuming
        out: Checkpoint written at the end (and every ``checkpoint_every`` steps)
        state: Resumed state; a fresh one is created otherwise
        log_path: Tab-separated per-step log, appended to when resuming
        max_steps: Stop once the step counter reaches this value

    Returns:
        Final TrainState

    Raises:
        DatasetError: Fewer than 2 labels, a label without training flows, or a PMI
            window other than the configured one
        DimensionMismatchError: Resumed model has a different class count
        TrainingDivergedError: A loss term became NaN or infinite
    """
    if state is None:
        if cfg is None:
            raise ValueError("either cfg or state is required")
        state = TrainState.fresh(cfg, dataset.label_names)
    cfg = state.config
    model, optimizer = state.model, state.optimizer

    train_flows = [f.truncated(cfg.flow_len_cap) for f in dataset.split(Split.TRAIN)]
    _check_dataset(dataset, train_flows, state)
    torch.set_num_threads(cfg.threads)

    per_epoch = steps_per_epoch(len(train_flows), cfg)
    total_steps = per_epoch * cfg.epochs
    log = _open_log(log_path, append=state.step > 0)
    logger.info(
        "training on {} flow(s), {} step(s) per epoch, {} epoch(s), variant {}",
        len(train_flows),
        per_epoch,
        cfg.epochs,
        cfg.variant,
    )

    try:
        while state.step < total_steps and (max_steps is None or state.step < max_steps):
            epoch = state.step // per_epoch
            order = epoch_order(len(train_flows), cfg.seed, epoch)
            micro = [order[i : i + cfg.batch_size] for i in range(0, len(order), cfg.batch_size)]

            for local_step in range(state.step - epoch * per_epoch, per_epoch):
                if max_steps is not None and state.step >= max_steps:
                    break
                group = micro[local_step * cfg.grad_accumulation : (local_step + 1) * cfg.grad_accumulation]
                model.train()
                optimizer.zero_grad(set_to_none=True)
                used, sums = accumulate_gradients(model, train_flows, group, cfg, state.step, epoch)

                lr = lr_at(state.step + 1, total_steps, cfg)
                for param_group in optimizer.param_groups:
                    param_group["lr"] = lr
                if used:
                    optimizer.step()
                state.step += 1

                row = {name: value / max(used, 1) for name, value in sums.items()}
                state.running_loss += row["total"]
                state.running_steps += 1
                if log is not None:
                    values = [f"{row[name]:.9g}" for name in LOG_COLUMNS[2:]]
                    log.write("\t".join([str(state.step), f"{lr:.9g}", *values]) + "\n")
                if out is not None and cfg.checkpoint_every and state.step % cfg.checkpoint_every == 0:
                    state.save(out)

            if state.step % per_epoch == 0 and state.step // per_epoch > state.epoch:
                state.epoch = state.step // per_epoch
                mean_loss = state.running_loss / state.running_steps if state.running_steps else math.nan
                state.running_loss, state.running_steps = 0.0, 0
                if not math.isnan(mean_loss) and (state.best_loss is None or mean_loss < state.best_loss):
                    state.best_loss = mean_loss
                logger.info("epoch {}/{}: mean loss {:.4f}", state.epoch, cfg.epochs, mean_loss)
    finally:
        if log is not None:
            log.close()

    if out is not None:
        state.save(out)
        logger.info("saved checkpoint to {} at step {}", out, state.step)
    return state
