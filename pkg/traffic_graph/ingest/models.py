"""
Flow Data Models

Five-tuple keyed packet sequences before and after cleaning.
"""

import struct
from enum import Enum
from typing import List, Optional

from pydantic import BaseModel, ConfigDict, Field

__all__ = [
    "CapturedPacket",
    "CleanFlow",
    "CleanPacket",
    "FiveTuple",
    "RawFlow",
    "RejectReason",
]


class FiveTuple(BaseModel):
    """
    Flow identity

    Attributes:
        src_ip: Source address bytes (4 for IPv4, 16 for IPv6)
        dst_ip: Destination address bytes
        src_port: Source port
        dst_port: Destination port
        protocol: IP protocol number
    """

    model_config = ConfigDict(frozen=True)

    src_ip: bytes
    dst_ip: bytes
    src_port: int = Field(ge=0, le=0xFFFF)
    dst_port: int = Field(ge=0, le=0xFFFF)
    protocol: int = Field(ge=0, le=0xFF)

    def swapped(self) -> "FiveTuple":
        """The same tuple seen from the other direction"""
        return FiveTuple(
            src_ip=self.dst_ip,
            dst_ip=self.src_ip,
            src_port=self.dst_port,
            dst_port=self.src_port,
            protocol=self.protocol,
        )

    def flow_key(self) -> "FiveTuple":
        """
        Direction-normalized key: the lower (address, port) endpoint is the source

        >>> a = FiveTuple(src_ip=b"\\x0a\\x00\\x00\\x02", dst_ip=b"\\x0a\\x00\\x00\\x01", src_port=80, dst_port=5000, protocol=6)
        >>> a.flow_key() == a.swapped().flow_key()
        True
        """
        if (self.src_ip, self.src_port) <= (self.dst_ip, self.dst_port):
            return self
        return self.swapped()

    def key_bytes(self) -> bytes:
        """Byte encoding of the normalized key, used for deterministic ordering"""
        key = self.flow_key()
        return (
            struct.pack(">B", key.protocol)
            + key.src_ip
            + struct.pack(">H", key.src_port)
            + key.dst_ip
            + struct.pack(">H", key.dst_port)
        )


class CapturedPacket(BaseModel):
    """
    Decoded packet before cleaning

    Attributes:
        index: Record position in its capture file (tie-break for equal timestamps)
        timestamp: Seconds since the capture epoch
        direction: 0 when sent from the flow key's source endpoint, 1 otherwise
        ip_version: 4 or 6
        protocol: IP protocol number (6 TCP, 17 UDP)
        network_header: Raw IP header bytes, addresses included
        transport_header: Raw TCP/UDP header bytes, ports included
        payload: Transport payload bytes
        seq: TCP sequence number, None for UDP
        checksum_valid: Whether the IP and transport checksums verified
        captured_length: Captured frame length
    """

    model_config = ConfigDict(frozen=True)

    index: int
    timestamp: float
    direction: int = Field(ge=0, le=1)
    ip_version: int
    protocol: int
    network_header: bytes
    transport_header: bytes
    payload: bytes
    seq: Optional[int] = None
    checksum_valid: bool = True
    captured_length: int


class RawFlow(BaseModel):
    """
    Assembled flow before cleaning

    Attributes:
        key: Direction-normalized five-tuple
        label: Category index
        packets: Packets in ascending timestamp order
        block_index: Time block number, 0 when blocking is disabled
    """

    model_config = ConfigDict(frozen=True)

    key: FiveTuple
    label: int = Field(ge=0)
    packets: List[CapturedPacket]
    block_index: int = Field(default=0, ge=0)


class CleanPacket(BaseModel):
    """
    Scrubbed packet

    ``header_bytes`` holds the IP header without its address fields followed
    by the transport header without its port fields. The removed fields are
    cut out, not zeroed.

    Attributes:
        timestamp: Seconds since the capture epoch
        header_bytes: Scrubbed network and transport header bytes
        payload_bytes: Transport payload
    """

    model_config = ConfigDict(frozen=True)

    timestamp: float = 0.0
    header_bytes: bytes
    payload_bytes: bytes


class CleanFlow(BaseModel):
    """
    Cleaned and truncated flow

    Attributes:
        key: Direction-normalized five-tuple (kept for ordering, never serialized)
        label: Category index
        packets: Between 1 and the flow length cap scrubbed packets
        block_index: Time block number
    """

    model_config = ConfigDict(frozen=True)

    key: Optional[FiveTuple] = None
    label: int = Field(ge=0)
    packets: List[CleanPacket] = Field(min_length=1)
    block_index: int = Field(default=0, ge=0)


class RejectReason(str, Enum):
    """
    Why a flow was dropped during cleaning
    """

    NO_PAYLOAD = "no payload"
    """No payload-bearing packet survived cleaning"""

    TOO_LONG = "too long"
    """More packets than the flow length limit"""
