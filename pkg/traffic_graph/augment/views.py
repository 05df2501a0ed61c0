"""
Stochastic View Construction

Packet-level views drop graph nodes and then edges; flow-level views drop
whole packets. Every function takes an explicit generator so a view is a pure
function of (input, settings, random stream).
"""

from typing import Tuple

import numpy as np

from traffic_graph.config.augment import AugmentConfig
from traffic_graph.graphs.graph import TrafficGraph

__all__ = ["derive_rng", "drop_edges", "drop_nodes", "drop_packets", "make_packet_view"]


def derive_rng(seed: int, *indices: int) -> np.random.Generator:
    """
    Independent generator for one (seed, stream, ...) coordinate

    Streams derived from different index tuples never overlap, so samples can
    be augmented in any order or in parallel with identical results.

    >>> a = derive_rng(7, 2, 0, 3).random(3)
    >>> b = derive_rng(7, 2, 0, 3).random(3)
    >>> bool((a == b).all())
    True
    """
    return np.random.default_rng([seed, *indices])


def _keep_mask(n: int, p: float, rng: np.random.Generator, retain_one: bool) -> np.ndarray:
    keep = rng.random(n) >= p
    if retain_one and n and not keep.any():
        keep[rng.integers(n)] = True
    return keep


def drop_nodes(graph: TrafficGraph, p: float, rng: np.random.Generator) -> TrafficGraph:
    """
    Remove each node with probability p, along with its incident edges

    Survivors keep their relative order. When every node is drawn for removal
    one of them, chosen uniformly, is kept.

    Args:
        graph: Input graph
        p: Drop probability
        rng: Random stream

    Returns:
        New graph, or the input itself when nothing was dropped
    """
    n = graph.num_nodes
    if p <= 0.0 or n == 0:
        return graph
    keep = _keep_mask(n, p, rng, retain_one=True)
    if keep.all():
        return graph

    remap = np.full(n, -1, dtype=np.int64)
    remap[keep] = np.arange(int(keep.sum()))
    edges = graph.edges
    if edges.size:
        edges = remap[edges[keep[edges[:, 0]] & keep[edges[:, 1]]]]
    return TrafficGraph(nodes=graph.nodes[keep], edges=edges.reshape(-1, 2), origin=graph.origin)


def drop_edges(graph: TrafficGraph, p: float, rng: np.random.Generator) -> TrafficGraph:
    """
    Remove each edge with probability p; nodes are untouched
    """
    if p <= 0.0 or graph.num_edges == 0:
        return graph
    keep = _keep_mask(graph.num_edges, p, rng, retain_one=False)
    if keep.all():
        return graph
    return TrafficGraph(nodes=graph.nodes, edges=graph.edges[keep], origin=graph.origin)


def make_packet_view(
    header: TrafficGraph,
    payload: TrafficGraph,
    cfg: AugmentConfig,
    rng: np.random.Generator,
) -> Tuple[TrafficGraph, TrafficGraph]:
    """
    Augmented (header, payload) pair of one packet

    Node dropping runs before edge dropping, on each graph whose flag is set.
    The header is always processed first so the stream is consumed in a fixed
    order.

    Args:
        header: Anchor header graph
        payload: Anchor payload graph
        cfg: Drop ratios and per-graph flags
        rng: Random stream for this packet

    Returns:
        (header view, payload view)
    """
    if cfg.augment_header:
        header = drop_edges(drop_nodes(header, cfg.p_node_drop, rng), cfg.p_edge_drop, rng)
    if cfg.augment_payload:
        payload = drop_edges(drop_nodes(payload, cfg.p_node_drop, rng), cfg.p_edge_drop, rng)
    return header, payload


def drop_packets(n: int, p: float, rng: np.random.Generator) -> np.ndarray:
    """
    Keep-mask for a flow of n packets

    Each position is dropped with probability p; if all are dropped, one
    uniformly chosen position survives. Dropped packets are removed from the
    sequence fed to the flow encoder, not zero-filled.

    Args:
        n: Flow length, at least 1
        p: Drop probability
        rng: Random stream for this flow

    Returns:
        Boolean mask of length n with at least one True

    Raises:
        ValueError: n < 1
    """
    if n < 1:
        raise ValueError(f"flow length must be at least 1, got {n}")
    if p <= 0.0:
        return np.ones(n, dtype=bool)
    return _keep_mask(n, p, rng, retain_one=True)
