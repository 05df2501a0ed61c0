"""
Augment Module

Node, edge and packet dropping for contrastive views.
"""

from traffic_graph.augment.views import derive_rng, drop_edges, drop_nodes, drop_packets, make_packet_view

__all__ = ["derive_rng", "drop_edges", "drop_nodes", "drop_packets", "make_packet_view"]
