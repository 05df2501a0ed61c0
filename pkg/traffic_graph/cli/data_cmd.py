"""
Data Commands

preprocess, synth and stats.
"""

from pathlib import Path
from typing import Optional

import typer
from loguru import logger

from traffic_graph.cli.utils import echo_statistics, exit_on_error
from traffic_graph.constants import DEFAULT_PMI_WINDOW, DEFAULT_TRAIN_RATIO
from traffic_graph.dataset.builder import PreprocessOptions, build_dataset, load_manifest, manifest_from_directory
from traffic_graph.dataset.codec import read_dataset, write_dataset
from traffic_graph.dataset.synth import SynthOptions, synthesize_dataset
from traffic_graph.exceptions import ConfigurationError, DatasetError


def _options(profile: Optional[str], **values: object) -> PreprocessOptions:
    try:
        if profile is not None:
            return PreprocessOptions.for_profile(profile, **values)
        return PreprocessOptions.model_validate(values)
    except ValueError as e:
        raise ConfigurationError(f"Invalid preprocessing option: {e}") from e


def preprocess(
    input_dir: Optional[Path] = typer.Option(
        None, "--input", "-i", help="Directory of <label>/<capture>.pcap files (or holding manifest.toml)"
    ),
    manifest: Optional[Path] = typer.Option(None, "--manifest", "-m", help="Manifest TOML listing captures and labels"),
    profile: str = typer.Option("vpn", "--profile", "-p", help="Dataset profile: vpn, nonvpn, tor, nontor"),
    out: Path = typer.Option(..., "--out", "-o", help="Dataset file to write"),
    seed: int = typer.Option(0, "--seed", help="Split seed"),
    window: int = typer.Option(DEFAULT_PMI_WINDOW, "--window", help="PMI window length"),
    train_ratio: float = typer.Option(DEFAULT_TRAIN_RATIO, "--train-ratio", help="Per-label training fraction"),
    workers: int = typer.Option(1, "--workers", "-w", help="Capture-level worker processes"),
    verify_checksums: bool = typer.Option(
        True, "--verify-checksums/--no-verify-checksums", help="Drop packets with bad checksums"
    ),
) -> None:
    """
    Build a dataset file from packet captures.
    """
    with exit_on_error():
        options = _options(
            profile,
            seed=seed,
            pmi_window=window,
            train_ratio=train_ratio,
            workers=workers,
            verify_checksums=verify_checksums,
        )
        if manifest is not None:
            loaded = load_manifest(manifest)
        elif input_dir is not None:
            loaded = manifest_from_directory(input_dir)
        else:
            raise ConfigurationError("One of --input or --manifest is required", config_key="input")

        dataset, summary = build_dataset(loaded, options)
        write_dataset(dataset, out)
        tally = summary.tally
        logger.info(
            "kept {} flow(s); dropped {} bad, {} retransmitted, {} empty packet(s); rejected {}",
            tally.kept_flows,
            tally.bad_packets,
            tally.retransmissions,
            tally.empty_payload_packets,
            tally.rejected or "none",
        )
        typer.echo(f"Wrote {out}")
        echo_statistics(dataset)


def synth(
    classes: int = typer.Option(4, "--classes", "-C", help="Number of classes (at least 2)"),
    flows_per_class: int = typer.Option(50, "--flows-per-class", "-n", help="Flows per class (at least 4)"),
    out: Path = typer.Option(..., "--out", "-o", help="Dataset file to write"),
    seed: int = typer.Option(0, "--seed", help="Generator and split seed"),
    profile: Optional[str] = typer.Option(None, "--profile", "-p", help="Apply a profile's preprocessing rules"),
    span_seconds: Optional[float] = typer.Option(
        None, "--span-seconds", help="Spread each flow's packets over this many seconds"
    ),
    captures: Optional[Path] = typer.Option(None, "--captures", help="Keep the generated pcaps in this directory"),
) -> None:
    """
    Generate a separable synthetic dataset through the real preprocessing pipeline.
    """
    with exit_on_error():
        try:
            options = SynthOptions(classes=classes, flows_per_class=flows_per_class, seed=seed, span_seconds=span_seconds)
        except ValueError as e:
            raise ConfigurationError(f"Invalid synthetic dataset options: {e}") from e
        dataset, _ = synthesize_dataset(options, _options(profile, seed=seed), work_dir=captures)
        write_dataset(dataset, out)
        typer.echo(f"Wrote {out}")
        echo_statistics(dataset)


def stats(
    dataset: Path = typer.Option(..., "--dataset", "-d", help="Dataset file"),
) -> None:
    """
    Print flow, packet and category counts of a dataset.
    """
    with exit_on_error():
        loaded = read_dataset(dataset)
        if not loaded.flows:
            raise DatasetError("Dataset holds no flows", path=str(dataset))
        typer.echo(f"{dataset}: {loaded.num_classes} categories, PMI window {loaded.pmi_window}")
        echo_statistics(loaded)
