"""
Capture Reader Unit Tests
"""

import struct
from pathlib import Path
from typing import List, Tuple

import pytest

from traffic_graph.exceptions import CaptureError, UnknownMagicError
from traffic_graph.ingest import parse_capture

RECORDS: List[Tuple[int, int, bytes]] = [
    (100, 250, b"\x01" * 20),
    (101, 0, b"\x02" * 34),
    (101, 999_999, b"\x03" * 7),
]


def handwritten_pcap(records=RECORDS, endian: str = "<", magic: int = 0xA1B2C3D4, linktype: int = 1) -> bytes:
    """Classic pcap bytes built field by field"""
    out = struct.pack(endian + "IHHiIII", magic, 2, 4, 0, 0, 65535, linktype)
    for sec, frac, data in records:
        out += struct.pack(endian + "IIII", sec, frac, len(data), len(data) + 4) + data
    return out


class TestParseCapture:
    """Record walking tests"""

    def test_empty_capture(self, tmp_path: Path):
        """Test a global header alone yields no packets"""
        path = tmp_path / "empty.pcap"
        path.write_bytes(handwritten_pcap(records=[]))

        capture = parse_capture(path)

        assert capture.packets == []
        assert capture.malformed_records == 0

    @pytest.mark.parametrize("endian", ["<", ">"])
    def test_three_records(self, tmp_path: Path, endian: str):
        """Test records come back in order with timestamps, in both byte orders"""
        path = tmp_path / "three.pcap"
        path.write_bytes(handwritten_pcap(endian=endian))

        capture = parse_capture(path)

        assert [p.index for p in capture.packets] == [0, 1, 2]
        assert [p.data for p in capture.packets] == [r[2] for r in RECORDS]
        assert capture.packets[0].timestamp == pytest.approx(100.000250)
        assert capture.packets[2].timestamp == pytest.approx(101.999999)
        assert capture.packets[1].wire_length == 38
        assert capture.linktype == 1

    def test_nanosecond_resolution(self, tmp_path: Path):
        """Test the nanosecond magic scales the fraction by 1e-9"""
        path = tmp_path / "nano.pcap"
        path.write_bytes(handwritten_pcap(records=[(5, 500_000_000, b"\x00" * 4)], magic=0xA1B23C4D))

        assert parse_capture(path).packets[0].timestamp == pytest.approx(5.5)

    def test_truncated_mid_record(self, tmp_path: Path):
        """Test a cut third record leaves the first two and counts one malformed record"""
        data = handwritten_pcap()
        path = tmp_path / "cut.pcap"
        path.write_bytes(data[: len(data) - 3])

        capture = parse_capture(path)

        assert len(capture.packets) == 2
        assert capture.malformed_records == 1

    def test_truncated_record_header(self, tmp_path: Path):
        """Test a partial record header counts as malformed"""
        path = tmp_path / "cut.pcap"
        path.write_bytes(handwritten_pcap(records=RECORDS[:1]) + b"\x00" * 5)

        capture = parse_capture(path)

        assert len(capture.packets) == 1
        assert capture.malformed_records == 1


class TestCaptureErrors:
    """Error handling tests"""

    def test_unknown_magic(self, tmp_path: Path):
        """Test pcapng and other formats are refused"""
        path = tmp_path / "x.pcapng"
        path.write_bytes(struct.pack(">I", 0x0A0D0D0A) + b"\x00" * 40)

        with pytest.raises(UnknownMagicError) as exc_info:
            parse_capture(path)
        assert exc_info.value.magic == 0x0A0D0D0A

    def test_too_short(self, tmp_path: Path):
        """Test a file shorter than the magic number"""
        path = tmp_path / "short.pcap"
        path.write_bytes(b"\xd4\xc3")

        with pytest.raises(CaptureError, match="too short"):
            parse_capture(path)

    def test_missing_file(self, tmp_path: Path):
        """Test unreadable path"""
        with pytest.raises(CaptureError, match="Cannot read"):
            parse_capture(tmp_path / "nope.pcap")
