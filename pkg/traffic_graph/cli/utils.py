"""
CLI Utilities

Error-to-exit-code mapping, override parsing and shared output helpers.
"""

from contextlib import contextmanager
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence

import typer
from loguru import logger

from traffic_graph.config.training import TrainConfig, build_train_config
from traffic_graph.constants import EXIT_DATA, EXIT_RUNTIME, EXIT_USAGE
from traffic_graph.dataset.records import Dataset, DatasetStatistics, Split
from traffic_graph.exceptions import (
    ConfigurationError,
    DataError,
    GraphError,
    LossError,
    TrafficGraphError,
    TrainingError,
)

__all__ = [
    "echo_statistics",
    "exit_code_for",
    "exit_on_error",
    "format_statistics",
    "load_train_config",
    "parse_overrides",
]

_EXIT_CODES = (
    ((ConfigurationError,), EXIT_USAGE),
    ((DataError, GraphError), EXIT_DATA),
    ((TrainingError, LossError), EXIT_RUNTIME),
)


def exit_code_for(error: BaseException) -> int:
    """
    Exit code of an error: 1 usage/configuration, 2 data, 3 runtime
    """
    for types, code in _EXIT_CODES:
        if isinstance(error, types):
            return code
    return EXIT_RUNTIME


@contextmanager
def exit_on_error() -> Iterator[None]:
    """
    Turn package errors into a message on stderr and the matching exit code
    """
    try:
        yield
    except TrafficGraphError as e:
        code = exit_code_for(e)
        logger.debug("command failed with {}: {}", type(e).__name__, e)
        typer.echo(f"Error: {e}", err=True)
        raise typer.Exit(code)


def parse_overrides(args: Sequence[str]) -> Dict[str, str]:
    """
    Parse trailing ``--key value`` / ``--key=value`` / ``--flag`` arguments

    >>> parse_overrides(["--epochs", "3", "--p-node-drop=0.2", "--enable-fcl"])
    {'epochs': '3', 'p-node-drop': '0.2', 'enable-fcl': 'true'}

    Raises:
        ConfigurationError: A value without a key
    """
    overrides: Dict[str, str] = {}
    items: List[str] = list(args)
    i = 0
    while i < len(items):
        item = items[i]
        if not item.startswith("--") or len(item) == 2:
            raise ConfigurationError(f"Unexpected argument: {item}", config_key=item)
        key, sep, value = item[2:].partition("=")
        if not sep:
            if i + 1 < len(items) and not items[i + 1].startswith("--"):
                value = items[i + 1]
                i += 1
            else:
                value = "true"
        overrides[key] = value
        i += 1
    return overrides


def load_train_config(
    profile: Optional[str],
    config_file: Optional[Path],
    variant: Optional[str],
    overrides: Dict[str, str],
) -> TrainConfig:
    """
    build_train_config with a missing file reported as a configuration error
    """
    try:
        return build_train_config(profile, config_file, variant, overrides)
    except FileNotFoundError as e:
        raise ConfigurationError(str(e), config_key="config") from e


def format_statistics(stats: DatasetStatistics) -> str:
    """Flow and packet counts per label and per split"""
    width = max([len("label")] + [len(s.label) for s in stats.per_label])
    lines = [f"  {'label':<{width}}  {'#flow':>8}  {'#packet':>9}  {'train':>12}  {'test':>12}"]
    for s in stats.per_label:
        lines.append(
            f"  {s.label:<{width}}  {s.flows:>8}  {s.packets:>9}  "
            f"{f'{s.train_flows}/{s.train_packets}':>12}  {f'{s.test_flows}/{s.test_packets}':>12}"
        )
    train_flows, train_packets = stats.split_counts(Split.TRAIN)
    test_flows, test_packets = stats.split_counts(Split.TEST)
    lines.append(
        f"  {'total':<{width}}  {stats.flows:>8}  {stats.packets:>9}  "
        f"{f'{train_flows}/{train_packets}':>12}  {f'{test_flows}/{test_packets}':>12}"
    )
    lines.append(f"  #category {stats.categories}  (train/test columns are flows/packets)")
    return "\n".join(lines)


def echo_statistics(dataset: Dataset) -> None:
    typer.echo(format_statistics(dataset.statistics()))
