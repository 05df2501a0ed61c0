"""
Synthetic Capture Generator Unit Tests
"""

from pathlib import Path

import numpy as np
import pytest
from pydantic import ValidationError
from sklearn.linear_model import LogisticRegression
from sklearn.metrics import f1_score

from traffic_graph.dataset import (
    Split,
    SynthOptions,
    class_signature,
    load_manifest,
    synthesize_dataset,
    write_synthetic_captures,
)
from traffic_graph.ingest import parse_capture


class TestSynthOptions:
    """Option validation tests"""

    def test_defaults(self):
        """Test the default shape is 4 classes of 50 flows"""
        options = SynthOptions()
        assert (options.classes, options.flows_per_class) == (4, 50)

    @pytest.mark.parametrize("values", [{"classes": 1}, {"flows_per_class": 3}, {"min_packets": 9, "max_packets": 8}])
    def test_invalid(self, values: dict):
        """Test out-of-range shapes"""
        with pytest.raises(ValidationError):
            SynthOptions(**values)


class TestClassSignature:
    """Per-class byte signature tests"""

    def test_disjoint(self):
        """Test favoured byte sets of different classes share nothing"""
        sets = [set(class_signature(c, seed=0)[0].tolist()) for c in range(8)]
        for i in range(8):
            for j in range(i + 1, 8):
                assert not sets[i] & sets[j]

    def test_seeded(self):
        """Test the signature depends on the seed only through the permutation"""
        a, _ = class_signature(2, seed=1)
        b, _ = class_signature(2, seed=1)
        assert a.tolist() == b.tolist()
        assert len(a) == 16


class TestWriteCaptures:
    """Capture writer tests"""

    def test_files_and_manifest(self, tmp_path: Path):
        """Test one capture per class and a loadable manifest"""
        manifest_path = write_synthetic_captures(tmp_path, SynthOptions(classes=3, flows_per_class=4))

        manifest = load_manifest(manifest_path)

        assert manifest.labels == ["class0", "class1", "class2"]
        assert [c.path.name for c in manifest.captures] == ["class0.pcap", "class1.pcap", "class2.pcap"]
        assert all(c.path.is_file() for c in manifest.captures)

    def test_parsable(self, tmp_path: Path):
        """Test the reader accepts every written record"""
        write_synthetic_captures(tmp_path, SynthOptions(classes=2, flows_per_class=4))

        parsed = parse_capture(tmp_path / "class1.pcap")

        assert parsed.malformed_records == 0
        assert len(parsed.packets) >= 4 * 8

    def test_deterministic(self, tmp_path: Path):
        """Test the same seed writes identical captures"""
        options = SynthOptions(classes=2, flows_per_class=4, seed=9)
        write_synthetic_captures(tmp_path / "a", options)
        write_synthetic_captures(tmp_path / "b", options)

        for name in ("class0.pcap", "class1.pcap"):
            assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


class TestSynthesizeDataset:
    """End-to-end generation tests"""

    def test_default_shape(self):
        """Test 4 x 50 flows split 180/20"""
        dataset, summary = synthesize_dataset(SynthOptions())
        stats = dataset.statistics()

        assert dataset.num_classes == 4
        assert stats.flows == 200
        assert stats.split_counts(Split.TRAIN)[0] == 180
        assert stats.split_counts(Split.TEST)[0] == 20
        assert all(s.test_flows == 5 for s in stats.per_label)
        assert summary.tally.retransmissions > 0

    def test_flow_lengths_capped(self, small_dataset):
        """Test no flow keeps more than 15 packets"""
        assert all(1 <= f.num_packets <= 15 for f in small_dataset.flows)

    def test_pure_acks_removed(self, small_dataset):
        """Test every kept packet carries payload"""
        assert all(p.packet.payload_bytes for f in small_dataset.flows for p in f.packets)

    def test_separable_by_byte_histograms(self):
        """Test a logistic model on payload byte histograms reaches macro-F1 0.95"""
        dataset, _ = synthesize_dataset(SynthOptions())

        def histograms(split: Split):
            flows = dataset.split(split)
            rows = []
            for f in flows:
                payload = b"".join(p.packet.payload_bytes for p in f.packets)
                counts = np.bincount(np.frombuffer(payload, np.uint8), minlength=256)
                rows.append(counts / counts.sum())
            return np.array(rows), np.array([f.label for f in flows])

        x_train, y_train = histograms(Split.TRAIN)
        x_test, y_test = histograms(Split.TEST)
        baseline = LogisticRegression(max_iter=1000).fit(x_train, y_train)

        assert f1_score(y_test, baseline.predict(x_test), average="macro") >= 0.95
