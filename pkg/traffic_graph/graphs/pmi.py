"""
Windowed byte co-occurrence statistics and point-wise mutual information
"""

import math
from dataclasses import dataclass
from typing import Union

import numpy as np

from traffic_graph.exceptions import GraphError

__all__ = ["CooccurrenceStats", "count_cooccurrence", "pmi", "as_byte_array"]

ByteLike = Union[bytes, bytearray, memoryview, np.ndarray, list]


def as_byte_array(data: ByteLike) -> np.ndarray:
    """View any byte sequence as a uint8 array"""
    if isinstance(data, np.ndarray):
        return data.astype(np.uint8, copy=False)
    if isinstance(data, list):
        return np.asarray(data, dtype=np.uint8)
    return np.frombuffer(bytes(data), dtype=np.uint8)


@dataclass(frozen=True)
class CooccurrenceStats:
    """
    Window counts behind the PMI estimate

    Attributes:
        pair_counts: 256x256 symmetric matrix; [a, b] is the number of windows holding both a and b
        unigram_counts: [a] is the number of windows holding a
        total_windows: Number of windows
    """

    pair_counts: np.ndarray
    unigram_counts: np.ndarray
    total_windows: int


def count_cooccurrence(data: ByteLike, window: int) -> CooccurrenceStats:
    """
    Count byte co-occurrences over sliding windows

    Windows of length min(window, n) start at every position 0..n-w. Each
    window counts once per distinct value and once per distinct value pair.

    Args:
        data: Byte sequence
        window: Window length, at least 2

    Returns:
        CooccurrenceStats

    Raises:
        GraphError: Empty sequence
        ValueError: window < 2
    """
    if window < 2:
        raise ValueError(f"window must be at least 2, got {window}")
    values = as_byte_array(data)
    if values.size == 0:
        raise GraphError("Cannot count co-occurrences of an empty byte sequence")

    width = min(window, values.size)
    windows = np.lib.stride_tricks.sliding_window_view(values, width).astype(np.int64)

    # distinct values per window
    rows = np.sort(windows, axis=1)
    first = np.ones(rows.shape, dtype=bool)
    first[:, 1:] = rows[:, 1:] != rows[:, :-1]
    unigram = np.bincount(rows[first], minlength=256)

    # distinct unordered value pairs per window, encoded as lo * 256 + hi
    left, right = np.triu_indices(width, k=1)
    a, b = windows[:, left], windows[:, right]
    codes = np.where(a != b, np.minimum(a, b) * 256 + np.maximum(a, b), -1)
    codes.sort(axis=1)
    first = codes >= 0
    first[:, 1:] &= codes[:, 1:] != codes[:, :-1]
    upper = np.bincount(codes[first], minlength=256 * 256).reshape(256, 256)

    return CooccurrenceStats(
        pair_counts=upper + upper.T,
        unigram_counts=unigram,
        total_windows=int(windows.shape[0]),
    )


def pmi(stats: CooccurrenceStats, a: int, b: int) -> float:
    """
    Point-wise mutual information of two byte values

    Args:
        stats: Co-occurrence statistics
        a: First byte value
        b: Second byte value, different from a

    Returns:
        log(p(a, b) / (p(a) p(b))), or -inf when the pair never co-occurs

    Raises:
        GraphError: a == b, or either byte never occurs
    """
    if a == b:
        raise GraphError(f"PMI needs two distinct byte values, got {a} twice")
    uni_a = int(stats.unigram_counts[a])
    uni_b = int(stats.unigram_counts[b])
    if uni_a == 0 or uni_b == 0:
        raise GraphError(f"Unknown byte value: {a if uni_a == 0 else b}")
    pair = int(stats.pair_counts[a, b])
    if pair == 0:
        return float("-inf")
    total = stats.total_windows
    return math.log((pair / total) / ((uni_a / total) * (uni_b / total)))
