"""
Little-endian binary helpers shared by the dataset and checkpoint codecs

Files end with a CRC32 of every preceding byte. The trailer is checked before
any field is decoded, so a truncated file surfaces as a checksum error.
"""

import struct
import zlib
from pathlib import Path
from typing import Callable, Tuple, Type, Union

from traffic_graph.exceptions import ChecksumError, DataError

__all__ = ["ByteReader", "append_crc", "strip_crc", "write_atomic"]

_CRC = struct.Struct("<I")


def append_crc(body: bytes) -> bytes:
    return body + _CRC.pack(zlib.crc32(body) & 0xFFFFFFFF)


def strip_crc(data: bytes, path: str) -> bytes:
    """
    Verify and remove the CRC32 trailer

    Raises:
        ChecksumError: Missing or mismatching trailer
    """
    if len(data) < _CRC.size:
        raise ChecksumError(path, expected=0, found=0)
    body, (expected,) = data[: -_CRC.size], _CRC.unpack(data[-_CRC.size :])
    found = zlib.crc32(body) & 0xFFFFFFFF
    if found != expected:
        raise ChecksumError(path, expected=expected, found=found)
    return body


def write_atomic(path: Union[str, Path], data: bytes) -> None:
    """Write through a sibling temporary file so readers never see a partial file"""
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    tmp = target.with_name(target.name + ".tmp")
    tmp.write_bytes(data)
    tmp.replace(target)


class ByteReader:
    """
    Cursor over a byte buffer

    Short reads raise the error type given at construction, carrying the file
    path.
    """

    def __init__(self, data: bytes, path: str, error: Type[DataError] = DataError) -> None:
        self._data = memoryview(data)
        self._pos = 0
        self._path = path
        self._error: Callable[..., DataError] = error

    @property
    def remaining(self) -> int:
        return len(self._data) - self._pos

    def take(self, n: int) -> bytes:
        if n < 0 or self._pos + n > len(self._data):
            raise self._error(f"Unexpected end of data at offset {self._pos} (wanted {n} bytes)", path=self._path)
        chunk = bytes(self._data[self._pos : self._pos + n])
        self._pos += n
        return chunk

    def unpack(self, fmt: str) -> Tuple:
        size = struct.calcsize(fmt)
        return struct.unpack(fmt, self.take(size))

    def u16(self) -> int:
        return int(self.unpack("<H")[0])

    def u32(self) -> int:
        return int(self.unpack("<I")[0])

    def blob16(self) -> bytes:
        """u16 length followed by that many bytes"""
        return self.take(self.u16())

    def expect_end(self) -> None:
        if self.remaining:
            raise self._error(f"{self.remaining} trailing byte(s) after the last record", path=self._path)
