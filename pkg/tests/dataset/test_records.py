"""
Dataset Record Unit Tests
"""

from traffic_graph.dataset import Dataset, FlowRecord, PacketRecord, Split
from traffic_graph.graphs import build_packet_graphs
from traffic_graph.ingest import CleanPacket


def record(label: int, split: Split, packets: int = 2) -> FlowRecord:
    clean = CleanPacket(header_bytes=b"\x45\x00\x00\x28", payload_bytes=b"abc")
    items = tuple(PacketRecord(clean, *build_packet_graphs(clean)) for _ in range(packets))
    return FlowRecord(label=label, block_index=0, split=split, packets=items)


class TestDataset:
    """Dataset accessor tests"""

    def test_split_selection(self):
        """Test split filtering keeps dataset order"""
        flows = [record(0, Split.TRAIN), record(1, Split.TEST), record(1, Split.TRAIN)]
        dataset = Dataset(label_names=["a", "b"], pmi_window=5, flows=flows)

        assert dataset.split(Split.TRAIN) == [flows[0], flows[2]]
        assert dataset.split(Split.TEST) == [flows[1]]
        assert dataset.split(None) == flows

    def test_statistics(self):
        """Test per-label and per-split counts"""
        dataset = Dataset(
            label_names=["a", "b", "c"],
            pmi_window=5,
            flows=[record(0, Split.TRAIN, 3), record(0, Split.TEST, 1), record(1, Split.TRAIN, 2)],
        )

        stats = dataset.statistics()

        assert stats.categories == 3
        assert stats.flows == 3
        assert stats.packets == 6
        assert stats.split_counts(Split.TRAIN) == (2, 5)
        assert stats.split_counts(Split.TEST) == (1, 1)
        assert [s.flows for s in stats.per_label] == [2, 1, 0]

    def test_small_dataset_shape(self, small_dataset: Dataset):
        """Test 3 x 8 flows split 7/1 per label"""
        stats = small_dataset.statistics()

        assert stats.flows == 24
        assert all((s.train_flows, s.test_flows) == (7, 1) for s in stats.per_label)


class TestFlowRecord:
    """Flow record tests"""

    def test_truncated(self):
        """Test a long flow keeps its first packets and its metadata"""
        flow = record(1, Split.TEST, packets=4)

        cut = flow.truncated(2)

        assert cut.packets == flow.packets[:2]
        assert (cut.label, cut.split, cut.block_index) == (1, Split.TEST, 0)

    def test_truncated_short_flow(self):
        """Test a flow within the cap is returned as is"""
        flow = record(0, Split.TRAIN, packets=2)
        assert flow.truncated(15) is flow
