"""
Shared fixtures: frame builders, pcap writers and a small synthetic dataset
"""

import socket
import struct
from pathlib import Path
from typing import Callable, List, Optional, Sequence, Tuple

import dpkt
import pytest

from traffic_graph.config import ConfigLoader, TrainConfig
from traffic_graph.dataset import Dataset, SynthOptions, synthesize_dataset

Frame = Tuple[float, bytes]


def build_frame(
    src: str = "10.0.0.1",
    dst: str = "172.16.0.1",
    sport: int = 40000,
    dport: int = 443,
    payload: bytes = b"",
    tcp: bool = True,
    seq: int = 1000,
    flags: int = dpkt.tcp.TH_ACK | dpkt.tcp.TH_PUSH,
    bad_checksum: bool = False,
) -> bytes:
    """Ethernet/IPv4 TCP or UDP frame with valid checksums unless asked otherwise"""
    src_ip, dst_ip = socket.inet_aton(src), socket.inet_aton(dst)
    protocol = dpkt.ip.IP_PROTO_TCP if tcp else dpkt.ip.IP_PROTO_UDP
    if tcp:
        segment: dpkt.Packet = dpkt.tcp.TCP(sport=sport, dport=dport, seq=seq, flags=flags, win=1024, data=payload)
    else:
        segment = dpkt.udp.UDP(sport=sport, dport=dport, data=payload)
        segment.ulen = 8 + len(payload)
    segment.sum = 0
    raw = bytes(segment)
    checksum = dpkt.dpkt.in_cksum(src_ip + dst_ip + struct.pack(">BBH", 0, protocol, len(raw)) + raw)
    if not tcp and checksum == 0:
        checksum = 0xFFFF
    segment.sum = checksum ^ 0x5A5A if bad_checksum else checksum

    ip = dpkt.ip.IP(src=src_ip, dst=dst_ip, p=protocol, ttl=64, id=7, data=segment)
    ip.len = 20 + len(raw)
    ip.sum = 0
    ip.sum = dpkt.dpkt.in_cksum(ip.pack_hdr())
    eth = dpkt.ethernet.Ethernet(
        src=b"\x02\x00\x00\x00\x00\x01", dst=b"\x02\x00\x00\x00\x00\x02", type=dpkt.ethernet.ETH_TYPE_IP, data=ip
    )
    return bytes(eth)


def write_pcap(path: Path, frames: Sequence[Frame], linktype: int = dpkt.pcap.DLT_EN10MB) -> Path:
    """Write (timestamp, frame) pairs with dpkt's writer"""
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "wb") as f:
        writer = dpkt.pcap.Writer(f, linktype=linktype)
        for ts, frame in frames:
            writer.writepkt(frame, ts=ts)
    return path


def flow_frames(
    count: int,
    client: str = "10.0.0.1",
    server: str = "172.16.0.1",
    sport: int = 40000,
    tcp: bool = True,
    start: float = 0.0,
    gap: float = 0.5,
    payload: Optional[Callable[[int], bytes]] = None,
) -> List[Frame]:
    """Alternating-direction data packets of one flow"""
    make = payload or (lambda k: bytes([k % 256]) * (10 + k))
    frames = []
    seq = {True: 1000, False: 5000}
    for k in range(count):
        outbound = k % 2 == 0
        data = make(k)
        frames.append(
            (
                start + k * gap,
                build_frame(
                    src=client if outbound else server,
                    dst=server if outbound else client,
                    sport=sport if outbound else 443,
                    dport=443 if outbound else sport,
                    payload=data,
                    tcp=tcp,
                    seq=seq[outbound],
                ),
            )
        )
        seq[outbound] += len(data)
    return frames


@pytest.fixture(autouse=True)
def clear_config_cache():
    """Parsed TOML files are cached per process"""
    ConfigLoader.clear_cache()
    yield
    ConfigLoader.clear_cache()


@pytest.fixture(scope="session")
def small_dataset(tmp_path_factory: pytest.TempPathFactory) -> Dataset:
    """3 classes x 8 flows of 3-5 packets, built through the real pipeline"""
    options = SynthOptions(classes=3, flows_per_class=8, seed=0, min_packets=3, max_packets=5)
    dataset, _ = synthesize_dataset(options, work_dir=tmp_path_factory.mktemp("synth"))
    return dataset


@pytest.fixture
def tiny_config() -> TrainConfig:
    """Small network, two short epochs"""
    return TrainConfig(
        batch_size=4,
        epochs=2,
        embed_dim=8,
        hidden_dim=8,
        gnn_layers=2,
        lr_max=1e-2,
        lr_min=1e-4,
        seed=3,
    )
