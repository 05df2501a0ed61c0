"""
Preprocessed Dataset Records

A dataset holds every cleaned flow with its per-packet graph pair and the
train/test marker assigned by the stratified split.
"""

from dataclasses import dataclass, field, replace
from enum import IntEnum
from typing import Dict, List, Optional, Tuple

from pydantic import BaseModel, Field

from traffic_graph.graphs.graph import TrafficGraph
from traffic_graph.ingest.models import CleanPacket

__all__ = ["Dataset", "DatasetStatistics", "FlowRecord", "LabelStatistics", "PacketRecord", "Split"]


class Split(IntEnum):
    TRAIN = 0
    TEST = 1


@dataclass(frozen=True)
class PacketRecord:
    """
    One scrubbed packet with its header and payload graphs
    """

    packet: CleanPacket
    header_graph: TrafficGraph
    payload_graph: TrafficGraph


@dataclass(frozen=True)
class FlowRecord:
    """
    One flow sample

    Attributes:
        label: Category index
        block_index: Time block number, 0 without blocking
        split: Train or test marker
        packets: Between 1 and the flow length cap packets
    """

    label: int
    block_index: int
    split: Split
    packets: Tuple[PacketRecord, ...]

    @property
    def num_packets(self) -> int:
        return len(self.packets)

    def truncated(self, cap: int) -> "FlowRecord":
        """The flow limited to its first ``cap`` packets; itself when already short enough"""
        if self.num_packets <= cap:
            return self
        return replace(self, packets=self.packets[:cap])


class LabelStatistics(BaseModel):
    """
    Sample counts of one category
    """

    label: str
    train_flows: int = 0
    test_flows: int = 0
    train_packets: int = 0
    test_packets: int = 0

    @property
    def flows(self) -> int:
        return self.train_flows + self.test_flows

    @property
    def packets(self) -> int:
        return self.train_packets + self.test_packets


class DatasetStatistics(BaseModel):
    """
    Flow, packet and category counts per split and per label
    """

    categories: int
    per_label: List[LabelStatistics] = Field(default_factory=list)

    @property
    def flows(self) -> int:
        return sum(s.flows for s in self.per_label)

    @property
    def packets(self) -> int:
        return sum(s.packets for s in self.per_label)

    def split_counts(self, split: Split) -> Tuple[int, int]:
        """(flows, packets) of one split"""
        if split is Split.TRAIN:
            return sum(s.train_flows for s in self.per_label), sum(s.train_packets for s in self.per_label)
        return sum(s.test_flows for s in self.per_label), sum(s.test_packets for s in self.per_label)


@dataclass
class Dataset:
    """
    Preprocessed dataset

    Attributes:
        label_names: Category names; the position is the label index
        pmi_window: Window the graphs were built with
        flows: Flow samples in deterministic order
    """

    label_names: List[str]
    pmi_window: int
    flows: List[FlowRecord] = field(default_factory=list)

    @property
    def num_classes(self) -> int:
        return len(self.label_names)

    def split(self, which: Optional[Split]) -> List[FlowRecord]:
        """Flows of one split in dataset order; None returns every flow"""
        if which is None:
            return list(self.flows)
        return [f for f in self.flows if f.split is which]

    def statistics(self) -> DatasetStatistics:
        per_label: Dict[int, LabelStatistics] = {
            i: LabelStatistics(label=name) for i, name in enumerate(self.label_names)
        }
        for flow in self.flows:
            stats = per_label[flow.label]
            if flow.split is Split.TRAIN:
                stats.train_flows += 1
                stats.train_packets += flow.num_packets
            else:
                stats.test_flows += 1
                stats.test_packets += flow.num_packets
        return DatasetStatistics(categories=self.num_classes, per_label=list(per_label.values()))
