"""
Dataset File Codec

Layout, all integers little-endian::

    magic "CTFE" | version u16 | classes u16 | pmi window u16
    classes x (name length u16 | utf-8 name)
    flow count u32
    per flow:   label u16 | block index u32 | split u8 | packet count u8
    per packet: header length u16 | header bytes | payload length u16 | payload bytes
                header graph | payload graph
    per graph:  node count u16 | node byte values | edge count u32 | edge count x (i u16 | j u16)
    CRC32 u32 of everything above

Writing the same Dataset twice yields byte-identical files.
"""

import io
import struct
from pathlib import Path
from typing import Union

import numpy as np
from loguru import logger

from traffic_graph.constants import DATASET_MAGIC, DATASET_VERSION
from traffic_graph.dataset.binary import ByteReader, append_crc, strip_crc, write_atomic
from traffic_graph.dataset.records import Dataset, FlowRecord, PacketRecord, Split
from traffic_graph.exceptions import DatasetFormatError, VersionMismatchError
from traffic_graph.graphs.graph import GraphOrigin, TrafficGraph
from traffic_graph.ingest.models import CleanPacket

__all__ = ["decode_dataset", "encode_dataset", "read_dataset", "write_dataset"]


def _put_blob(out: io.BytesIO, data: bytes) -> None:
    if len(data) > 0xFFFF:
        raise DatasetFormatError(f"Field of {len(data)} bytes does not fit a u16 length")
    out.write(struct.pack("<H", len(data)))
    out.write(data)


def _put_graph(out: io.BytesIO, graph: TrafficGraph) -> None:
    out.write(struct.pack("<H", graph.num_nodes))
    out.write(graph.nodes.tobytes())
    out.write(struct.pack("<I", graph.num_edges))
    out.write(graph.edges.astype("<u2").tobytes())


def _get_graph(reader: ByteReader, origin: GraphOrigin) -> TrafficGraph:
    n = reader.u16()
    nodes = np.frombuffer(reader.take(n), dtype=np.uint8)
    e = reader.u32()
    edges = np.frombuffer(reader.take(4 * e), dtype="<u2").reshape(e, 2)
    return TrafficGraph(nodes=nodes, edges=edges, origin=origin)


def encode_dataset(dataset: Dataset) -> bytes:
    """Serialize a dataset, trailer included"""
    out = io.BytesIO()
    out.write(DATASET_MAGIC)
    out.write(struct.pack("<HHH", DATASET_VERSION, dataset.num_classes, dataset.pmi_window))
    for name in dataset.label_names:
        _put_blob(out, name.encode("utf-8"))
    out.write(struct.pack("<I", len(dataset.flows)))
    for flow in dataset.flows:
        out.write(struct.pack("<HIBB", flow.label, flow.block_index, int(flow.split), flow.num_packets))
        for record in flow.packets:
            _put_blob(out, record.packet.header_bytes)
            _put_blob(out, record.packet.payload_bytes)
            _put_graph(out, record.header_graph)
            _put_graph(out, record.payload_graph)
    return append_crc(out.getvalue())


def decode_dataset(data: bytes, path: str = "<memory>") -> Dataset:
    """
    Parse a serialized dataset

    Raises:
        ChecksumError: Truncated or corrupted file
        DatasetFormatError: Bad magic or malformed records
        VersionMismatchError: Unsupported format version
    """
    body = strip_crc(data, path)
    reader = ByteReader(body, path, DatasetFormatError)
    magic = reader.take(len(DATASET_MAGIC))
    if magic != DATASET_MAGIC:
        raise DatasetFormatError(f"Not a dataset file (magic {magic!r})", path=path)
    version = reader.u16()
    if version != DATASET_VERSION:
        raise VersionMismatchError(version, DATASET_VERSION, path=path)
    num_classes, window = reader.u16(), reader.u16()
    try:
        label_names = [reader.blob16().decode("utf-8") for _ in range(num_classes)]
    except UnicodeDecodeError as e:
        raise DatasetFormatError(f"Label name is not valid UTF-8: {e}", path=path) from e

    flows = []
    for _ in range(reader.u32()):
        label, block_index, split, count = reader.unpack("<HIBB")
        if label >= num_classes or split not in (Split.TRAIN, Split.TEST) or count == 0:
            raise DatasetFormatError(f"Invalid flow record (label={label}, split={split}, packets={count})", path=path)
        packets = []
        for _ in range(count):
            packet = CleanPacket(header_bytes=reader.blob16(), payload_bytes=reader.blob16())
            packets.append(
                PacketRecord(
                    packet=packet,
                    header_graph=_get_graph(reader, GraphOrigin.HEADER),
                    payload_graph=_get_graph(reader, GraphOrigin.PAYLOAD),
                )
            )
        flows.append(FlowRecord(label=label, block_index=block_index, split=Split(split), packets=tuple(packets)))
    reader.expect_end()
    return Dataset(label_names=label_names, pmi_window=window, flows=flows)


def write_dataset(dataset: Dataset, path: Union[str, Path]) -> None:
    data = encode_dataset(dataset)
    write_atomic(path, data)
    logger.info("wrote {} flow(s) to {} ({} bytes)", len(dataset.flows), path, len(data))


def read_dataset(path: Union[str, Path]) -> Dataset:
    """
    Load a dataset file

    Raises:
        DatasetFormatError: Missing file or malformed content
        ChecksumError: Truncated or corrupted file
        VersionMismatchError: Unsupported format version
    """
    file_path = Path(path)
    if not file_path.is_file():
        raise DatasetFormatError("Dataset file not found", path=str(file_path))
    dataset = decode_dataset(file_path.read_bytes(), str(file_path))
    logger.debug("read {} flow(s) from {}", len(dataset.flows), file_path)
    return dataset
