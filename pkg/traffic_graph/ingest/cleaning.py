"""
Flow Cleaning

Removes bad, retransmitted and payload-less packets, rejects unusable flows,
truncates to the flow length cap and scrubs identifying header fields.
"""

from typing import Dict, List, Set, Tuple, Union

from pydantic import BaseModel, ConfigDict, Field

from traffic_graph.constants import FLOW_LENGTH_CAP, MAX_FLOW_PACKETS
from traffic_graph.ingest.models import CapturedPacket, CleanFlow, CleanPacket, RawFlow, RejectReason

__all__ = ["CleaningTally", "FlowRejection", "clean_flow", "scrub_packet"]

# Address fields inside the IP header, as (start, end) offsets
_ADDRESS_SPANS = {4: (12, 20), 6: (8, 40)}
_PORT_SPAN = (0, 4)


class FlowRejection(BaseModel):
    """
    A flow dropped during cleaning

    Attributes:
        reason: Why the flow was dropped
        packet_count: Packet count of the flow before cleaning
    """

    model_config = ConfigDict(frozen=True)

    reason: RejectReason
    packet_count: int


class CleaningTally(BaseModel):
    """
    Running counters over many clean_flow calls
    """

    kept_flows: int = 0
    bad_packets: int = 0
    retransmissions: int = 0
    empty_payload_packets: int = 0
    rejected: Dict[str, int] = Field(default_factory=dict)

    def record(self, result: "Union[CleanFlow, FlowRejection]") -> None:
        if isinstance(result, FlowRejection):
            self.rejected[result.reason.value] = self.rejected.get(result.reason.value, 0) + 1
        else:
            self.kept_flows += 1

    def merge(self, other: "CleaningTally") -> None:
        self.kept_flows += other.kept_flows
        self.bad_packets += other.bad_packets
        self.retransmissions += other.retransmissions
        self.empty_payload_packets += other.empty_payload_packets
        for reason, count in other.rejected.items():
            self.rejected[reason] = self.rejected.get(reason, 0) + count


def _excise(data: bytes, span: Tuple[int, int]) -> bytes:
    start, end = span
    return data[:start] + data[end:]


def scrub_packet(packet: CapturedPacket) -> CleanPacket:
    """
    Cut addresses and ports out of the headers

    Args:
        packet: Decoded packet

    Returns:
        CleanPacket with no link-layer, address or port bytes
    """
    network = _excise(packet.network_header, _ADDRESS_SPANS[packet.ip_version])
    transport = _excise(packet.transport_header, _PORT_SPAN)
    return CleanPacket(timestamp=packet.timestamp, header_bytes=network + transport, payload_bytes=packet.payload)


def clean_flow(
    flow: RawFlow,
    flow_length_cap: int = FLOW_LENGTH_CAP,
    max_packets: int = MAX_FLOW_PACKETS,
    verify_checksums: bool = True,
    tally: "CleaningTally | None" = None,
) -> Union[CleanFlow, FlowRejection]:
    """
    Clean one assembled flow

    Steps, in order: drop checksum-invalid and zero-length packets, drop TCP
    retransmissions (a repeated (seq, payload length) span in the same
    direction), drop packets without payload, reject, truncate, scrub.

    Args:
        flow: Assembled flow
        flow_length_cap: Packets kept from the start of the flow
        max_packets: Flows with more packets than this are rejected
        verify_checksums: Treat checksum failures as bad packets; disable for
            captures taken on hosts with checksum offloading
        tally: Optional counters updated in place

    Returns:
        CleanFlow, or FlowRejection naming the reason
    """
    if len(flow.packets) > max_packets:
        result: Union[CleanFlow, FlowRejection] = FlowRejection(
            reason=RejectReason.TOO_LONG, packet_count=len(flow.packets)
        )
        if tally is not None:
            tally.record(result)
        return result

    kept: List[CapturedPacket] = []
    seen_spans: Set[Tuple[int, int, int]] = set()
    bad = retransmitted = empty = 0
    for packet in flow.packets:
        if packet.captured_length == 0 or (verify_checksums and not packet.checksum_valid):
            bad += 1
            continue
        if packet.seq is not None and packet.payload:
            span = (packet.direction, packet.seq, len(packet.payload))
            if span in seen_spans:
                retransmitted += 1
                continue
            seen_spans.add(span)
        if not packet.payload:
            empty += 1
            continue
        kept.append(packet)

    if tally is not None:
        tally.bad_packets += bad
        tally.retransmissions += retransmitted
        tally.empty_payload_packets += empty

    if not kept:
        result = FlowRejection(reason=RejectReason.NO_PAYLOAD, packet_count=len(flow.packets))
    else:
        result = CleanFlow(
            key=flow.key,
            label=flow.label,
            packets=[scrub_packet(p) for p in kept[:flow_length_cap]],
            block_index=flow.block_index,
        )
    if tally is not None:
        tally.record(result)
    return result
