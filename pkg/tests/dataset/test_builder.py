"""
Preprocessing Pipeline Unit Tests
"""

from collections import Counter
from pathlib import Path

import pytest

from tests.conftest import flow_frames, write_pcap
from traffic_graph.config import CaptureEntry, DatasetManifest
from traffic_graph.dataset import (
    PreprocessOptions,
    Split,
    SynthOptions,
    build_dataset,
    encode_dataset,
    load_manifest,
    manifest_from_directory,
    process_capture,
    synthesize_dataset,
)
from traffic_graph.exceptions import ConfigurationError, DatasetError, SplitError


def labelled_tree(root: Path, flows_per_label: int = 3) -> Path:
    """<root>/<label>/capture.pcap with a few TCP flows each"""
    for offset, label in enumerate(("chat", "video")):
        frames = []
        for k in range(flows_per_label):
            frames += flow_frames(4, client=f"10.0.{offset}.{k + 1}", sport=41000 + k, start=k * 0.1)
        frames.sort(key=lambda item: item[0])
        write_pcap(root / label / "capture.pcap", frames)
    return root


class TestPreprocessOptions:
    """Option tests"""

    def test_profile_blocking(self):
        """Test the tor profile cuts into 60 second blocks"""
        assert PreprocessOptions.for_profile("tor").block_seconds == 60
        assert PreprocessOptions.for_profile("vpn").block_seconds is None

    def test_explicit_value_wins(self):
        """Test a caller value overrides the profile"""
        assert PreprocessOptions.for_profile("tor", block_seconds=30.0).block_seconds == 30.0


class TestManifestInput:
    """Manifest and directory input tests"""

    def test_directory_labels(self, tmp_path: Path):
        """Test sub-directories become sorted labels"""
        manifest = manifest_from_directory(labelled_tree(tmp_path))

        assert manifest.labels == ["chat", "video"]
        assert [c.label for c in manifest.captures] == ["chat", "video"]

    def test_manifest_file_takes_precedence(self, tmp_path: Path):
        """Test a manifest at the top of the directory is used"""
        labelled_tree(tmp_path)
        (tmp_path / "manifest.toml").write_text(
            'labels = ["video", "chat"]\n'
            '[[captures]]\npath = "chat/capture.pcap"\nlabel = "chat"\n'
            '[[captures]]\npath = "video/capture.pcap"\nlabel = "video"\n',
            encoding="utf-8",
        )

        assert manifest_from_directory(tmp_path).labels == ["video", "chat"]

    def test_empty_directory(self, tmp_path: Path):
        """Test no labelled captures"""
        with pytest.raises(DatasetError):
            manifest_from_directory(tmp_path)

    def test_single_label(self, tmp_path: Path):
        """Test one labelled directory is not enough"""
        write_pcap(tmp_path / "only" / "a.pcap", flow_frames(3))
        with pytest.raises(DatasetError, match="at least 2"):
            manifest_from_directory(tmp_path)

    def test_missing_directory(self, tmp_path: Path):
        """Test a path that does not exist"""
        with pytest.raises(DatasetError):
            manifest_from_directory(tmp_path / "absent")

    def test_missing_manifest(self, tmp_path: Path):
        """Test a manifest path that does not exist"""
        with pytest.raises(DatasetError, match="not found"):
            load_manifest(tmp_path / "manifest.toml")

    def test_invalid_manifest(self, tmp_path: Path):
        """Test a manifest naming an undeclared label"""
        path = tmp_path / "manifest.toml"
        path.write_text('labels = ["a", "b"]\n[[captures]]\npath = "x.pcap"\nlabel = "c"\n', encoding="utf-8")
        with pytest.raises(ConfigurationError):
            load_manifest(path)


class TestProcessCapture:
    """Single capture tests"""

    def test_flows_and_summary(self, tmp_path: Path):
        """Test two interleaved flows come out cleaned and counted"""
        frames = flow_frames(4, sport=41000) + flow_frames(3, sport=42000, start=0.2)
        path = write_pcap(tmp_path / "a.pcap", sorted(frames, key=lambda item: item[0]))

        flows, summary = process_capture(str(path), 1, PreprocessOptions())

        assert summary.records == 7
        assert summary.raw_flows == 2
        assert summary.tally.kept_flows == 2
        assert sorted(len(f.packets) for f in flows) == [3, 4]
        assert {f.label for f in flows} == {1}


class TestBuildDataset:
    """Whole pipeline tests"""

    def test_directory_input(self, tmp_path: Path):
        """Test a labelled tree becomes a split dataset"""
        dataset, summary = build_dataset(manifest_from_directory(labelled_tree(tmp_path)), PreprocessOptions(seed=1))

        assert dataset.label_names == ["chat", "video"]
        assert Counter(f.label for f in dataset.flows) == {0: 3, 1: 3}
        assert Counter(f.split for f in dataset.flows) == {Split.TRAIN: 4, Split.TEST: 2}
        assert len(summary.captures) == 2
        assert summary.statistics.flows == 6

    def test_graphs_use_window(self, tmp_path: Path):
        """Test the dataset records its PMI window"""
        dataset, _ = build_dataset(manifest_from_directory(labelled_tree(tmp_path)), PreprocessOptions(pmi_window=3))
        assert dataset.pmi_window == 3

    def test_deterministic(self, tmp_path: Path):
        """Test two runs produce identical files"""
        manifest = manifest_from_directory(labelled_tree(tmp_path))
        first, _ = build_dataset(manifest, PreprocessOptions(seed=4))
        second, _ = build_dataset(manifest, PreprocessOptions(seed=4))

        assert encode_dataset(first) == encode_dataset(second)

    def test_worker_count_irrelevant(self, tmp_path: Path):
        """Test a worker pool gives the same dataset as a single process"""
        manifest = manifest_from_directory(labelled_tree(tmp_path))
        serial, _ = build_dataset(manifest, PreprocessOptions(workers=1))
        parallel, _ = build_dataset(manifest, PreprocessOptions(workers=2))

        assert encode_dataset(serial) == encode_dataset(parallel)

    def test_single_flow_label(self, tmp_path: Path):
        """Test a label left with one flow cannot be split"""
        write_pcap(tmp_path / "a.pcap", flow_frames(3, sport=41000) + flow_frames(3, sport=41001, start=5))
        write_pcap(tmp_path / "b.pcap", flow_frames(3, client="10.9.9.9"))
        manifest = DatasetManifest(
            labels=["a", "b"],
            captures=[CaptureEntry(path=tmp_path / "a.pcap", label="a"), CaptureEntry(path=tmp_path / "b.pcap", label="b")],
        )

        with pytest.raises(SplitError) as exc_info:
            build_dataset(manifest)
        assert exc_info.value.label == "b"

    def test_no_usable_flows(self, tmp_path: Path):
        """Test captures holding only rejected flows"""
        for name in ("a", "b"):
            write_pcap(tmp_path / f"{name}.pcap", flow_frames(3, payload=lambda k: b""))
        manifest = DatasetManifest(
            labels=["a", "b"],
            captures=[CaptureEntry(path=tmp_path / f"{n}.pcap", label=n) for n in ("a", "b")],
        )

        with pytest.raises(DatasetError, match="No usable flows"):
            build_dataset(manifest)

    def test_tor_blocks(self, tmp_path: Path):
        """Test a 3-minute flow under the tor profile yields 3 records"""
        options = SynthOptions(classes=2, flows_per_class=4, seed=0, min_packets=6, max_packets=6, span_seconds=180)

        dataset, _ = synthesize_dataset(
            options, preprocess=PreprocessOptions.for_profile("tor", seed=0), work_dir=tmp_path
        )

        assert len(dataset.flows) == 2 * 4 * 3
        assert Counter(f.block_index for f in dataset.flows) == {0: 8, 1: 8, 2: 8}
