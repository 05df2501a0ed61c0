"""
Flow Assembly

Decodes link-layer frames down to TCP/UDP, groups them into bidirectional
five-tuple flows and optionally cuts flows into fixed time blocks.
"""

import math
import struct
from collections import defaultdict
from typing import Dict, List, Optional, Sequence, Tuple

import dpkt
from loguru import logger

from traffic_graph.constants import TIME_BLOCK_SECONDS
from traffic_graph.ingest.models import CapturedPacket, FiveTuple, RawFlow
from traffic_graph.ingest.pcap import RawPacket

__all__ = ["assemble_flows", "decode_packet", "split_time_blocks"]

_ETH_VLAN_TYPES = (dpkt.ethernet.ETH_TYPE_8021Q, 0x88A8)
_RAW_LINKTYPES = (dpkt.pcap.DLT_RAW, 12, 14, 101)
_LINUX_SLL = 113
_TRANSPORTS = (dpkt.ip.IP_PROTO_TCP, dpkt.ip.IP_PROTO_UDP)
_IP_FRAGMENT_MASK = dpkt.ip.IP_MF | dpkt.ip.IP_OFFMASK


def _network_layer(frame: bytes, linktype: int) -> Optional[bytes]:
    """Strip the link layer; None when the frame does not carry IPv4/IPv6"""
    if linktype == dpkt.pcap.DLT_EN10MB:
        if len(frame) < 14:
            return None
        offset = 12
        (eth_type,) = struct.unpack(">H", frame[offset : offset + 2])
        while eth_type in _ETH_VLAN_TYPES and len(frame) >= offset + 6:
            offset += 4
            (eth_type,) = struct.unpack(">H", frame[offset : offset + 2])
        if eth_type not in (dpkt.ethernet.ETH_TYPE_IP, dpkt.ethernet.ETH_TYPE_IP6):
            return None
        return frame[offset + 2 :]
    if linktype == _LINUX_SLL:
        try:
            sll = dpkt.sll.SLL(frame)
        except (dpkt.UnpackError, dpkt.NeedData):
            return None
        if sll.ethtype not in (dpkt.ethernet.ETH_TYPE_IP, dpkt.ethernet.ETH_TYPE_IP6):
            return None
        return frame[sll.__hdr_len__ :]
    if linktype in _RAW_LINKTYPES:
        return frame
    return None


def _pseudo_header(ip_version: int, src: bytes, dst: bytes, protocol: int, length: int) -> bytes:
    if ip_version == 4:
        return src + dst + struct.pack(">BBH", 0, protocol, length)
    return src + dst + struct.pack(">I3xB", length, protocol)


def decode_packet(raw: RawPacket, linktype: int) -> Optional[Tuple[FiveTuple, CapturedPacket]]:
    """
    Decode one frame down to its transport payload

    Args:
        raw: Captured frame
        linktype: Capture data link type

    Returns:
        (five-tuple as seen on the wire, decoded packet with direction 0), or
        None when the frame is not an unfragmented IPv4/IPv6 TCP or UDP packet
    """
    net = _network_layer(raw.data, linktype)
    if not net:
        return None

    version = net[0] >> 4
    truncated = False
    try:
        if version == 4:
            ip = dpkt.ip.IP(net)
            header_len = (net[0] & 0x0F) * 4
            total_len = ip.len
            (flags_offset,) = struct.unpack(">H", net[6:8])
            if header_len < 20 or total_len < header_len or flags_offset & _IP_FRAGMENT_MASK:
                return None
            protocol, src, dst = ip.p, ip.src, ip.dst
            ip_ok = dpkt.dpkt.in_cksum(net[:header_len]) == 0
        elif version == 6:
            ip6 = dpkt.ip6.IP6(net)
            header_len = 40
            total_len = header_len + ip6.plen
            # extension headers are not followed
            protocol, src, dst = net[6], ip6.src, ip6.dst
            ip_ok = True
        else:
            return None
    except (dpkt.UnpackError, dpkt.NeedData, struct.error):
        return None

    if protocol not in _TRANSPORTS:
        return None
    if len(net) < total_len:
        truncated = True
    segment = net[header_len:total_len]

    try:
        if protocol == dpkt.ip.IP_PROTO_TCP:
            tcp = dpkt.tcp.TCP(segment)
            transport_len = tcp.off * 4
            if transport_len < 20 or len(segment) < transport_len:
                return None
            sport, dport, seq = tcp.sport, tcp.dport, tcp.seq
            payload = segment[transport_len:]
            checksum_skipped = False
        else:
            udp = dpkt.udp.UDP(segment)
            transport_len = 8
            sport, dport, seq = udp.sport, udp.dport, None
            payload = segment[transport_len : max(transport_len, udp.ulen)]
            checksum_skipped = version == 4 and udp.sum == 0
    except (dpkt.UnpackError, dpkt.NeedData, struct.error):
        return None

    transport_ok = checksum_skipped or (
        dpkt.dpkt.in_cksum(_pseudo_header(version, src, dst, protocol, len(segment)) + segment) == 0
    )

    five_tuple = FiveTuple(src_ip=src, dst_ip=dst, src_port=sport, dst_port=dport, protocol=protocol)
    packet = CapturedPacket(
        index=raw.index,
        timestamp=raw.timestamp,
        direction=0,
        ip_version=version,
        protocol=protocol,
        network_header=net[:header_len],
        transport_header=segment[:transport_len],
        payload=payload,
        seq=seq,
        checksum_valid=ip_ok and transport_ok and not truncated,
        captured_length=len(raw.data),
    )
    return five_tuple, packet


def assemble_flows(packets: Sequence[RawPacket], label: int, linktype: int = dpkt.pcap.DLT_EN10MB) -> List[RawFlow]:
    """
    Group packets into bidirectional flows

    Args:
        packets: Frames of one capture in file order
        label: Category index shared by every flow of the capture
        linktype: Capture data link type

    Returns:
        Flows sorted by key bytes, each time-ordered with file order breaking ties
    """
    groups: Dict[FiveTuple, List[CapturedPacket]] = defaultdict(list)
    skipped = 0
    for raw in packets:
        decoded = decode_packet(raw, linktype)
        if decoded is None:
            skipped += 1
            continue
        five_tuple, packet = decoded
        key = five_tuple.flow_key()
        if key != five_tuple:
            packet = packet.model_copy(update={"direction": 1})
        groups[key].append(packet)

    if skipped:
        logger.debug("skipped {} non-TCP/UDP or unparseable packet(s)", skipped)

    flows = [
        RawFlow(key=key, label=label, packets=sorted(group, key=lambda p: (p.timestamp, p.index)))
        for key, group in groups.items()
    ]
    flows.sort(key=lambda f: f.key.key_bytes())
    return flows


def split_time_blocks(flow: RawFlow, block_seconds: float = TIME_BLOCK_SECONDS) -> List[RawFlow]:
    """
    Cut a flow into non-overlapping blocks measured from its first packet

    Args:
        flow: Time-ordered flow
        block_seconds: Block length in seconds

    Returns:
        One flow per non-empty block, ``block_index`` set to the block number

    Raises:
        ValueError: block_seconds is not positive
    """
    if block_seconds <= 0:
        raise ValueError(f"block_seconds must be positive, got {block_seconds}")
    if not flow.packets:
        return []

    start = flow.packets[0].timestamp
    blocks: Dict[int, List[CapturedPacket]] = defaultdict(list)
    for packet in flow.packets:
        blocks[int(math.floor((packet.timestamp - start) / block_seconds))].append(packet)

    return [
        flow.model_copy(update={"packets": blocks[k], "block_index": k}) for k in sorted(blocks)
    ]
