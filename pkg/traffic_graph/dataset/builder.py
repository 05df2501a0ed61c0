"""
Preprocessing Pipeline

Captures listed in a manifest go through parsing, flow assembly, optional
time blocking, cleaning, graph construction and the stratified split.
Captures are independent, so they may be processed by a worker pool; results
are merged in a fixed order and the output never depends on the worker count.
"""

from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import List, Optional, Tuple, Union

from loguru import logger
from pydantic import BaseModel, ConfigDict, Field

from traffic_graph.config.loader import ConfigLoader
from traffic_graph.config.manifest import CaptureEntry, DatasetManifest
from traffic_graph.config.profiles import get_profile
from traffic_graph.constants import (
    DEFAULT_MANIFEST_FILE,
    DEFAULT_PMI_WINDOW,
    DEFAULT_TRAIN_RATIO,
    FLOW_LENGTH_CAP,
    MAX_FLOW_PACKETS,
)
from traffic_graph.dataset.records import Dataset, DatasetStatistics, FlowRecord, PacketRecord, Split
from traffic_graph.exceptions import DatasetError, SplitError
from traffic_graph.graphs.graph import build_packet_graphs
from traffic_graph.ingest.cleaning import CleaningTally, clean_flow
from traffic_graph.ingest.flows import assemble_flows, split_time_blocks
from traffic_graph.ingest.models import CleanFlow
from traffic_graph.ingest.pcap import parse_capture
from traffic_graph.ingest.split import split_indices

__all__ = [
    "CaptureSummary",
    "PreprocessOptions",
    "PreprocessSummary",
    "build_dataset",
    "load_manifest",
    "manifest_from_directory",
    "process_capture",
]

_CAPTURE_SUFFIXES = (".pcap", ".cap")


class PreprocessOptions(BaseModel):
    """
    Preprocessing switches

    Attributes:
        pmi_window: Co-occurrence window for graph construction
        block_seconds: Cut flows into blocks of this many seconds, None disables
        flow_length_cap: Packets kept per flow
        max_flow_packets: Longer flows are rejected
        verify_checksums: Drop packets whose checksums fail
        train_ratio: Per-label training fraction
        seed: Split seed
        workers: Capture-level worker processes
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    pmi_window: int = Field(default=DEFAULT_PMI_WINDOW, ge=2)
    block_seconds: Optional[float] = Field(default=None, gt=0.0)
    flow_length_cap: int = Field(default=FLOW_LENGTH_CAP, ge=1, le=255)
    max_flow_packets: int = Field(default=MAX_FLOW_PACKETS, ge=1)
    verify_checksums: bool = True
    train_ratio: float = Field(default=DEFAULT_TRAIN_RATIO, gt=0.0, lt=1.0)
    seed: int = Field(default=0, ge=0)
    workers: int = Field(default=1, ge=1)

    @classmethod
    def for_profile(cls, profile: str, **values: object) -> "PreprocessOptions":
        """Options with the profile's blocking rule; explicit values win"""
        values.setdefault("block_seconds", get_profile(profile).block_seconds)
        return cls.model_validate(values)


class CaptureSummary(BaseModel):
    """
    What happened to one capture file
    """

    path: str
    label: int
    records: int = 0
    malformed_records: int = 0
    raw_flows: int = 0
    tally: CleaningTally = Field(default_factory=CleaningTally)


class PreprocessSummary(BaseModel):
    """
    Per-capture outcomes and the resulting dataset statistics
    """

    captures: List[CaptureSummary] = Field(default_factory=list)
    statistics: DatasetStatistics

    @property
    def tally(self) -> CleaningTally:
        total = CleaningTally()
        for capture in self.captures:
            total.merge(capture.tally)
        return total


def load_manifest(path: Union[str, Path]) -> DatasetManifest:
    """
    Load a manifest TOML file

    Raises:
        DatasetError: File missing
        ConfigurationError: Parse or validation failure
    """
    try:
        return ConfigLoader.from_file(DatasetManifest, path)
    except FileNotFoundError as e:
        raise DatasetError("Manifest file not found", path=str(path)) from e


def manifest_from_directory(directory: Union[str, Path]) -> DatasetManifest:
    """
    Manifest for a directory laid out as <label>/<capture>.pcap

    A manifest file at the top of the directory takes precedence. Otherwise
    every sub-directory holding at least one .pcap or .cap file becomes a
    label, in sorted order.

    Raises:
        DatasetError: Missing directory, or fewer than 2 labelled sub-directories
    """
    root = Path(directory)
    if not root.is_dir():
        raise DatasetError("Input directory not found", path=str(root))
    if (root / DEFAULT_MANIFEST_FILE).is_file():
        return load_manifest(root / DEFAULT_MANIFEST_FILE)
    captures = []
    for sub in sorted(p for p in root.iterdir() if p.is_dir()):
        files = sorted(f for f in sub.iterdir() if f.suffix.lower() in _CAPTURE_SUFFIXES and f.is_file())
        captures += [CaptureEntry(path=f, label=sub.name) for f in files]
    labels = sorted({c.label for c in captures})
    if len(labels) < 2:
        raise DatasetError(f"Found {len(labels)} labelled capture director(ies), at least 2 are required", path=str(root))
    return DatasetManifest(labels=labels, captures=captures)


def process_capture(path: str, label: int, options: PreprocessOptions) -> Tuple[List[CleanFlow], CaptureSummary]:
    """
    Turn one capture into cleaned flows

    Args:
        path: Capture file
        label: Category index of every flow in the capture
        options: Preprocessing switches

    Returns:
        (cleaned flows in key order, summary)
    """
    parsed = parse_capture(path)
    raw_flows = assemble_flows(parsed.packets, label, parsed.linktype)
    if options.block_seconds is not None:
        raw_flows = [block for flow in raw_flows for block in split_time_blocks(flow, options.block_seconds)]

    summary = CaptureSummary(
        path=path,
        label=label,
        records=len(parsed.packets),
        malformed_records=parsed.malformed_records,
        raw_flows=len(raw_flows),
    )
    flows: List[CleanFlow] = []
    for raw in raw_flows:
        result = clean_flow(
            raw,
            flow_length_cap=options.flow_length_cap,
            max_packets=options.max_flow_packets,
            verify_checksums=options.verify_checksums,
            tally=summary.tally,
        )
        if isinstance(result, CleanFlow):
            flows.append(result)

    logger.info(
        "{}: {} record(s), {} flow(s), {} kept, rejected {}",
        path,
        summary.records,
        summary.raw_flows,
        summary.tally.kept_flows,
        summary.tally.rejected or "none",
    )
    return flows, summary


def _process_job(job: Tuple[str, int, PreprocessOptions]) -> Tuple[List[CleanFlow], CaptureSummary]:
    return process_capture(*job)


def _to_record(flow: CleanFlow, split: Split, window: int) -> FlowRecord:
    packets = tuple(PacketRecord(p, *build_packet_graphs(p, window)) for p in flow.packets)
    return FlowRecord(label=flow.label, block_index=flow.block_index, split=split, packets=packets)


def build_dataset(manifest: DatasetManifest, options: Optional[PreprocessOptions] = None) -> Tuple[Dataset, PreprocessSummary]:
    """
    Run the whole preprocessing pipeline

    Flows are ordered by their normalized five-tuple bytes, then by manifest
    position, then by block index. Flows with equal keys from different
    captures stay separate.

    Args:
        manifest: Captures and label names
        options: Preprocessing switches

    Returns:
        (dataset with split markers, summary)

    Raises:
        DatasetError: No captures or no usable flows
        SplitError: A label ends up with fewer than 2 flows
        CaptureError: Unreadable capture
    """
    options = options or PreprocessOptions()
    if not manifest.captures:
        raise DatasetError("Manifest lists no captures")

    jobs = [(str(entry.path), manifest.label_index(entry.label), options) for entry in manifest.captures]
    if options.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=options.workers) as pool:
            results = list(pool.map(_process_job, jobs))
    else:
        results = [_process_job(job) for job in jobs]

    ordered = sorted(
        (
            (flow.key.key_bytes() if flow.key is not None else b"", position, flow.block_index, flow)
            for position, (flows, _) in enumerate(results)
            for flow in flows
        ),
        key=lambda item: item[:3],
    )
    flows = [item[3] for item in ordered]
    if not flows:
        raise DatasetError("No usable flows in the listed captures")

    counts = [0] * len(manifest.labels)
    for flow in flows:
        counts[flow.label] += 1
    for index, count in enumerate(counts):
        if count < 2:
            raise SplitError(manifest.labels[index], count)

    train_idx, _ = split_indices([f.label for f in flows], options.train_ratio, options.seed, manifest.labels)
    in_train = set(train_idx)
    dataset = Dataset(
        label_names=list(manifest.labels),
        pmi_window=options.pmi_window,
        flows=[
            _to_record(flow, Split.TRAIN if i in in_train else Split.TEST, options.pmi_window)
            for i, flow in enumerate(flows)
        ],
    )
    summary = PreprocessSummary(captures=[s for _, s in results], statistics=dataset.statistics())
    return dataset, summary
