"""
Dataset File Codec Unit Tests
"""

import struct
import zlib
from pathlib import Path

import pytest

from traffic_graph.dataset import Dataset, Split, decode_dataset, encode_dataset, read_dataset, write_dataset
from traffic_graph.exceptions import ChecksumError, DatasetFormatError, VersionMismatchError


def with_crc(body: bytes) -> bytes:
    return body + struct.pack("<I", zlib.crc32(body) & 0xFFFFFFFF)


class TestDatasetCodec:
    """Encode/decode tests"""

    def test_layout_prefix(self, small_dataset: Dataset):
        """Test magic, version, class count and window lead the file"""
        data = encode_dataset(small_dataset)

        assert data[:4] == b"CTFE"
        assert struct.unpack("<HHH", data[4:10]) == (1, 3, small_dataset.pmi_window)

    def test_rewrite_identical(self, small_dataset: Dataset, tmp_path: Path):
        """Test write, read, write again yields the same bytes"""
        first, second = tmp_path / "a.bin", tmp_path / "b.bin"
        write_dataset(small_dataset, first)
        write_dataset(read_dataset(first), second)

        assert first.read_bytes() == second.read_bytes()

    def test_content_preserved(self, small_dataset: Dataset):
        """Test labels, splits, bytes and graphs survive decoding"""
        decoded = decode_dataset(encode_dataset(small_dataset))

        assert decoded.label_names == small_dataset.label_names
        assert decoded.pmi_window == small_dataset.pmi_window
        assert len(decoded.flows) == len(small_dataset.flows)
        for ours, theirs in zip(decoded.flows, small_dataset.flows):
            assert (ours.label, ours.split, ours.block_index) == (theirs.label, theirs.split, theirs.block_index)
            for a, b in zip(ours.packets, theirs.packets):
                assert a.packet.header_bytes == b.packet.header_bytes
                assert a.packet.payload_bytes == b.packet.payload_bytes
                assert a.header_graph == b.header_graph
                assert a.payload_graph == b.payload_graph

    def test_empty_dataset(self):
        """Test a dataset without flows"""
        decoded = decode_dataset(encode_dataset(Dataset(label_names=["a", "b"], pmi_window=5)))
        assert decoded.flows == []
        assert decoded.num_classes == 2


class TestDatasetCodecErrors:
    """Corruption and format tests"""

    def test_truncated(self, small_dataset: Dataset):
        """Test a truncated file fails its checksum"""
        data = encode_dataset(small_dataset)
        with pytest.raises(ChecksumError):
            decode_dataset(data[: len(data) // 2])

    def test_flipped_byte(self, small_dataset: Dataset):
        """Test a single corrupted byte is detected"""
        data = bytearray(encode_dataset(small_dataset))
        data[20] ^= 0xFF
        with pytest.raises(ChecksumError):
            decode_dataset(bytes(data))

    def test_bad_magic(self):
        """Test another file type with a valid trailer"""
        with pytest.raises(DatasetFormatError, match="Not a dataset"):
            decode_dataset(with_crc(b"CTFM" + b"\x00" * 10))

    def test_version(self):
        """Test an unknown version"""
        with pytest.raises(VersionMismatchError) as exc_info:
            decode_dataset(with_crc(b"CTFE" + struct.pack("<HHH", 9, 2, 5)))
        assert exc_info.value.found == 9

    def test_trailing_bytes(self):
        """Test bytes after the last record"""
        body = encode_dataset(Dataset(label_names=["a", "b"], pmi_window=5))[:-4]
        with pytest.raises(DatasetFormatError, match="trailing"):
            decode_dataset(with_crc(body + b"\x00"))

    def test_label_out_of_range(self):
        """Test a flow label beyond the class count"""
        body = encode_dataset(Dataset(label_names=["a", "b"], pmi_window=5))[:-4]
        body = body[:-4] + struct.pack("<I", 1) + struct.pack("<HIBB", 7, 0, int(Split.TRAIN), 1)
        with pytest.raises(DatasetFormatError, match="Invalid flow record"):
            decode_dataset(with_crc(body))

    def test_missing_file(self, tmp_path: Path):
        """Test a path that does not exist"""
        with pytest.raises(DatasetFormatError, match="not found"):
            read_dataset(tmp_path / "nope.bin")
