"""
Synthetic Capture Generator

Writes one Ethernet pcap per class and a manifest, then runs the regular
preprocessing pipeline over them. Each class has its own set of favoured
payload byte values and its own payload-length rhythm, so classes are
separable from byte histograms alone. TCP classes include handshakes, pure
ACKs and exact retransmissions so cleaning has something to remove.
"""

import json
import struct
import tempfile
from pathlib import Path
from typing import List, Optional, Tuple, Union

import dpkt
import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, Field, model_validator

from traffic_graph.augment.views import derive_rng
from traffic_graph.constants import DEFAULT_MANIFEST_FILE, STREAM_SYNTH
from traffic_graph.dataset.builder import PreprocessOptions, PreprocessSummary, build_dataset, load_manifest
from traffic_graph.dataset.records import Dataset

__all__ = ["SynthOptions", "class_signature", "synthesize_dataset", "write_synthetic_captures"]

_SIGNATURE_SIZE = 16
_SIGNATURE_SHARE = 0.85
_RETRANSMIT_PROB = 0.1
_CLIENT_MAC = b"\x02\x00\x00\x00\x00\x01"
_SERVER_MAC = b"\x02\x00\x00\x00\x00\x02"


class SynthOptions(BaseModel):
    """
    Synthetic dataset shape

    Attributes:
        classes: Number of categories
        flows_per_class: Flows written per category
        seed: Generator seed
        min_packets: Fewest data packets per flow
        max_packets: Most data packets per flow
        span_seconds: Spread each flow's packets over this many seconds, None packs them tightly
    """

    model_config = ConfigDict(extra="forbid", frozen=True)

    classes: int = Field(default=4, ge=2, le=255)
    flows_per_class: int = Field(default=50, ge=4)
    seed: int = Field(default=0, ge=0)
    min_packets: int = Field(default=8, ge=1)
    max_packets: int = Field(default=20, ge=1)
    span_seconds: Optional[float] = Field(default=None, gt=0.0)

    @model_validator(mode="after")
    def check_packet_range(self) -> "SynthOptions":
        if self.min_packets > self.max_packets:
            raise ValueError("min_packets must not exceed max_packets")
        return self


def class_signature(label: int, seed: int) -> Tuple[np.ndarray, Tuple[int, int, int]]:
    """
    Favoured byte values and payload-length rhythm of one class

    Byte sets of the first 16 classes are disjoint.
    """
    order = derive_rng(seed, STREAM_SYNTH).permutation(256)
    start = (label * _SIGNATURE_SIZE) % 256
    favoured = np.roll(order, -start)[:_SIGNATURE_SIZE].astype(np.uint8)
    base = 32 + 20 * (label % 24)
    return favoured, (base, 2 * base + 8, base // 2 + 4)


def _payload(rng: np.random.Generator, favoured: np.ndarray, length: int) -> bytes:
    from_signature = rng.random(length) < _SIGNATURE_SHARE
    data = np.where(
        from_signature,
        rng.choice(favoured, size=length),
        rng.integers(0, 256, size=length),
    )
    return data.astype(np.uint8).tobytes()


def _frame(src: bytes, dst: bytes, segment: dpkt.Packet, protocol: int, ident: int) -> bytes:
    """Ethernet/IPv4 frame with correct IP and transport checksums"""
    segment.sum = 0
    raw = bytes(segment)
    pseudo = src + dst + struct.pack(">BBH", 0, protocol, len(raw))
    checksum = dpkt.dpkt.in_cksum(pseudo + raw)
    if protocol == dpkt.ip.IP_PROTO_UDP and checksum == 0:
        checksum = 0xFFFF
    segment.sum = checksum

    ip = dpkt.ip.IP(src=src, dst=dst, p=protocol, ttl=64, id=ident & 0xFFFF, data=segment)
    ip.len = 20 + len(raw)
    ip.sum = 0
    ip.sum = dpkt.dpkt.in_cksum(ip.pack_hdr())
    client_side = src[0] == 10
    eth = dpkt.ethernet.Ethernet(
        src=_CLIENT_MAC if client_side else _SERVER_MAC,
        dst=_SERVER_MAC if client_side else _CLIENT_MAC,
        type=dpkt.ethernet.ETH_TYPE_IP,
        data=ip,
    )
    return bytes(eth)


def _flow_frames(label: int, index: int, options: SynthOptions) -> List[Tuple[float, bytes]]:
    rng = derive_rng(options.seed, STREAM_SYNTH, label, index)
    favoured, rhythm = class_signature(label, options.seed)
    tcp = label % 2 == 0
    protocol = dpkt.ip.IP_PROTO_TCP if tcp else dpkt.ip.IP_PROTO_UDP

    client = bytes([10, label % 256, (index // 250) % 256, index % 250 + 1])
    server = bytes([172, 16, label % 256, 1])
    sport = 20000 + index % 40000
    dport = 443 if tcp else 4433

    n_data = int(rng.integers(options.min_packets, options.max_packets + 1))
    start = index * 0.25
    step = options.span_seconds / n_data if options.span_seconds else None
    clock = [start]

    def tick() -> float:
        clock[0] += float(rng.exponential(0.02)) + 1e-4
        return clock[0]

    frames: List[Tuple[float, bytes]] = []
    ident = [int(rng.integers(0, 0xFFFF))]
    seq = {0: int(rng.integers(0, 2**31)), 1: int(rng.integers(0, 2**31))}

    def emit(ts: float, outbound: bool, payload: bytes, flags: int = dpkt.tcp.TH_ACK, seq_no: Optional[int] = None) -> None:
        src, dst = (client, server) if outbound else (server, client)
        sp, dp = (sport, dport) if outbound else (dport, sport)
        if tcp:
            direction = 0 if outbound else 1
            segment: dpkt.Packet = dpkt.tcp.TCP(
                sport=sp,
                dport=dp,
                seq=seq[direction] if seq_no is None else seq_no,
                ack=seq[1 - direction],
                flags=flags,
                win=65535,
                data=payload,
            )
        else:
            segment = dpkt.udp.UDP(sport=sp, dport=dp, data=payload)
            segment.ulen = 8 + len(payload)
        ident[0] += 1
        frames.append((ts, _frame(src, dst, segment, protocol, ident[0])))

    if tcp:
        emit(tick(), True, b"", flags=dpkt.tcp.TH_SYN)
        seq[0] += 1
        emit(tick(), False, b"", flags=dpkt.tcp.TH_SYN | dpkt.tcp.TH_ACK)
        seq[1] += 1
        emit(tick(), True, b"")

    for k in range(n_data):
        outbound = k % 3 != 1
        length = max(1, rhythm[k % 3] + int(rng.integers(-4, 5)))
        payload = _payload(rng, favoured, length)
        ts = start + (k + 0.5) * step if step else tick()
        direction = 0 if outbound else 1
        sent_seq = seq[direction]
        emit(ts, outbound, payload, flags=dpkt.tcp.TH_ACK | dpkt.tcp.TH_PUSH)
        if tcp:
            seq[direction] = (seq[direction] + length) % 2**32
            if rng.random() < _RETRANSMIT_PROB:
                emit(ts + 1e-3, outbound, payload, flags=dpkt.tcp.TH_ACK | dpkt.tcp.TH_PUSH, seq_no=sent_seq)
            emit(ts + 2e-3, not outbound, b"")
    return frames


def write_synthetic_captures(out_dir: Union[str, Path], options: SynthOptions) -> Path:
    """
    Write one capture per class plus a manifest

    Args:
        out_dir: Target directory, created if missing
        options: Dataset shape

    Returns:
        Manifest path
    """
    directory = Path(out_dir)
    directory.mkdir(parents=True, exist_ok=True)
    labels = [f"class{c}" for c in range(options.classes)]
    lines = [f"labels = {json.dumps(labels)}", ""]

    for label, name in enumerate(labels):
        frames = [frame for i in range(options.flows_per_class) for frame in _flow_frames(label, i, options)]
        frames.sort(key=lambda item: item[0])
        capture = directory / f"{name}.pcap"
        with open(capture, "wb") as f:
            writer = dpkt.pcap.Writer(f, linktype=dpkt.pcap.DLT_EN10MB)
            for ts, frame in frames:
                writer.writepkt(frame, ts=ts)
        lines += ["[[captures]]", f"path = {json.dumps(capture.name)}", f"label = {json.dumps(name)}", ""]
        logger.debug("wrote {} frame(s) to {}", len(frames), capture)

    manifest = directory / DEFAULT_MANIFEST_FILE
    manifest.write_text("\n".join(lines), encoding="utf-8")
    return manifest


def synthesize_dataset(
    options: SynthOptions,
    preprocess: Optional[PreprocessOptions] = None,
    work_dir: Optional[Union[str, Path]] = None,
) -> Tuple[Dataset, PreprocessSummary]:
    """
    Generate synthetic captures and preprocess them

    Args:
        options: Dataset shape
        preprocess: Pipeline switches; the split seed defaults to the generator seed
        work_dir: Keep the captures here; a temporary directory is used otherwise

    Returns:
        (dataset, summary)
    """
    preprocess = preprocess or PreprocessOptions(seed=options.seed)
    if work_dir is not None:
        return build_dataset(load_manifest(write_synthetic_captures(work_dir, options)), preprocess)
    with tempfile.TemporaryDirectory(prefix="tgc-synth-") as tmp:
        return build_dataset(load_manifest(write_synthetic_captures(tmp, options)), preprocess)
