"""
Classic pcap reader

Walks pcap records using dpkt's header structures. Both byte orders and both
timestamp resolutions are accepted; a record cut short by the end of the file
is counted as malformed and ends the walk.
"""

import struct
from pathlib import Path
from typing import List, Union

import dpkt
from loguru import logger
from pydantic import BaseModel, ConfigDict

from traffic_graph.constants import PCAP_GLOBAL_HEADER_LEN, PCAP_MAGIC_MICRO, PCAP_MAGIC_NANO
from traffic_graph.exceptions import CaptureError, UnknownMagicError

__all__ = ["RawPacket", "ParsedCapture", "parse_capture"]


class RawPacket(BaseModel):
    """
    Link-layer frame with its capture timestamp

    Attributes:
        index: Position of the record in the capture file
        timestamp: Seconds since the capture epoch
        data: Captured frame bytes
        wire_length: Original frame length on the wire
    """

    model_config = ConfigDict(frozen=True)

    index: int
    timestamp: float
    data: bytes
    wire_length: int


class ParsedCapture(BaseModel):
    """
    Result of walking one capture file

    Attributes:
        path: Capture file path
        linktype: Data link type from the global header
        packets: Records in file order
        malformed_records: Trailing records skipped because they were truncated
    """

    model_config = ConfigDict(frozen=True)

    path: str
    linktype: int
    packets: List[RawPacket]
    malformed_records: int = 0


def _header_types(magic_bytes: bytes, path: str) -> tuple[type, type, float]:
    """Pick file/record header classes and the timestamp divisor from the magic number"""
    (big,) = struct.unpack(">I", magic_bytes)
    (little,) = struct.unpack("<I", magic_bytes)
    if big in (PCAP_MAGIC_MICRO, PCAP_MAGIC_NANO):
        return dpkt.pcap.FileHdr, dpkt.pcap.PktHdr, 1e6 if big == PCAP_MAGIC_MICRO else 1e9
    if little in (PCAP_MAGIC_MICRO, PCAP_MAGIC_NANO):
        return dpkt.pcap.LEFileHdr, dpkt.pcap.LEPktHdr, 1e6 if little == PCAP_MAGIC_MICRO else 1e9
    raise UnknownMagicError(big, path=path)


def parse_capture(path: Union[str, Path]) -> ParsedCapture:
    """
    Read every record of a classic pcap file

    Args:
        path: Capture file path

    Returns:
        ParsedCapture with packets in file order

    Raises:
        CaptureError: File cannot be read or is shorter than the global header
        UnknownMagicError: File does not start with a pcap magic number
    """
    path_str = str(path)
    try:
        buf = Path(path).read_bytes()
    except OSError as e:
        raise CaptureError(f"Cannot read capture: {e}", path=path_str) from e

    if len(buf) < 4:
        raise CaptureError("File too short for a pcap global header", path=path_str)
    file_hdr_type, rec_hdr_type, divisor = _header_types(buf[:4], path_str)
    if len(buf) < PCAP_GLOBAL_HEADER_LEN:
        raise CaptureError("File too short for a pcap global header", path=path_str)

    file_hdr = file_hdr_type(buf[:PCAP_GLOBAL_HEADER_LEN])
    rec_len = rec_hdr_type.__hdr_len__

    packets: List[RawPacket] = []
    malformed = 0
    offset = PCAP_GLOBAL_HEADER_LEN
    while offset < len(buf):
        if len(buf) - offset < rec_len:
            malformed += 1
            break
        rec = rec_hdr_type(buf[offset : offset + rec_len])
        start = offset + rec_len
        if len(buf) - start < rec.caplen:
            malformed += 1
            break
        packets.append(
            RawPacket(
                index=len(packets),
                timestamp=rec.tv_sec + rec.tv_usec / divisor,
                data=buf[start : start + rec.caplen],
                wire_length=rec.len,
            )
        )
        offset = start + rec.caplen

    if malformed:
        logger.warning("{}: skipped {} malformed trailing record(s)", path_str, malformed)
    logger.debug("{}: read {} record(s), linktype {}", path_str, len(packets), file_hdr.linktype)
    return ParsedCapture(path=path_str, linktype=file_hdr.linktype, packets=packets, malformed_records=malformed)
