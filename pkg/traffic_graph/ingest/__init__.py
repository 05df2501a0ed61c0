"""
Ingest Module

Capture parsing, flow assembly, cleaning and stratified splitting.
"""

from traffic_graph.ingest.cleaning import CleaningTally, FlowRejection, clean_flow, scrub_packet
from traffic_graph.ingest.flows import assemble_flows, decode_packet, split_time_blocks
from traffic_graph.ingest.models import CapturedPacket, CleanFlow, CleanPacket, FiveTuple, RawFlow, RejectReason
from traffic_graph.ingest.pcap import ParsedCapture, RawPacket, parse_capture
from traffic_graph.ingest.split import split_indices, stratified_split

__all__ = [
    "CapturedPacket",
    "CleanFlow",
    "CleanPacket",
    "CleaningTally",
    "FiveTuple",
    "FlowRejection",
    "ParsedCapture",
    "RawFlow",
    "RawPacket",
    "RejectReason",
    "assemble_flows",
    "clean_flow",
    "decode_packet",
    "parse_capture",
    "scrub_packet",
    "split_indices",
    "split_time_blocks",
    "stratified_split",
]
